//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines come out in order and
//! unbuffered. The process fails when a criterion fails, except for those
//! listed in `EXPECTED_FAILURES`, which are known to be unattainable.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use bjgeo_core::attain::{attain_hilbert, oracle_profile};
use bjgeo_core::linalg::dot;
use bjgeo_core::ortho::find_asymmetry_witness;
use bjgeo_core::random::{gaussian_matrix, gaussian_vector, random_gram, substream, uniform};
use bjgeo_core::verify::{
    check_cardinality_bound, check_dimension_multiplicity, check_hilbert_min_characterization, check_linf_asymmetry,
    check_mutual_orthogonality, check_nonsmooth_counterexample, check_preservation, check_reflexive_construct,
    check_sip_characterization, construct_rank_one_for_hyperspace, corpus, euclidean_dichotomy,
    operator_with_singular_values, APPROX_POINT_TOL,
};
use bjgeo_core::{
    attain, AttainOptions, AttainmentSet, Hyperspace, Matrix, Mode, NormSpace, Operator, SetForm, DEFAULT_TOL,
};
use nalgebra::DMatrix;

const TOL: f64 = DEFAULT_TOL;
const SEED: u64 = 42;

/// The hexagon norm is a Radon norm: Birkhoff-James orthogonality is
/// symmetric on it, so no asymmetry witness exists to be found.
const EXPECTED_FAILURES: &[u32] = &[9];

type Check = Result<(), String>;

/// Number, description, runtime limit, body.
type Criterion = (u32, &'static str, Duration, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn opts() -> AttainOptions {
    AttainOptions { tol: TOL, restarts: 32, seed: SEED }
}

fn matrix(rows: &[[f64; 2]]) -> Matrix {
    Matrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

fn near(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn pairs(mode: Mode, value: f64, points: &[[f64; 2]]) -> AttainmentSet {
    let points = points.iter().map(|p| p.to_vec()).collect();
    AttainmentSet::new(mode, value, false, SetForm::FinitePairs { points }, "expected")
}

fn err(e: bjgeo_core::Error) -> String {
    e.to_string()
}

fn criterion_1() -> Check {
    let hex = NormSpace::regular_hexagon();
    let op = Operator::endo(matrix(&[[1.0, 0.0], [0.0, 0.0]]), hex.clone()).map_err(err)?;
    let max = attain(&op, Mode::Max, &opts()).map_err(err)?;
    let min = attain(&op, Mode::Min, &opts()).map_err(err)?;
    let h = 3f64.sqrt() / 2.0;
    ensure(near(max.value, 1.0, TOL), || format!("‖T‖ = {}", max.value))?;
    ensure(near(min.value, 0.0, TOL), || format!("m(T) = {}", min.value))?;
    ensure(max.same_set(&pairs(Mode::Max, 1.0, &[[1.0, 0.0]]), &hex, TOL), || format!("M_T = {:?}", max.form))?;
    ensure(min.same_set(&pairs(Mode::Min, 0.0, &[[0.0, h]]), &hex, TOL), || format!("m_T = {:?}", min.form))
}

fn criterion_2() -> Check {
    let hex = NormSpace::regular_hexagon();
    let s = 3f64.sqrt() / 4.0;
    let op = Operator::endo(matrix(&[[0.75, -s], [s, 0.75]]), hex.clone()).map_err(err)?;
    let max = attain(&op, Mode::Max, &opts()).map_err(err)?;
    let min = attain(&op, Mode::Min, &opts()).map_err(err)?;
    ensure(near(max.value, 1.0, TOL), || format!("‖T‖ = {}", max.value))?;
    ensure(near(min.value, 0.75, TOL), || format!("m(T) = {}", min.value))?;
    let poly = hex.as_polygon().unwrap();
    for v in poly.vertices() {
        ensure(max.contains(&hex, v, TOL), || format!("vertex {v:?} missing from M_T"))?;
    }
    for p in [[0.75, s], [0.0, 2.0 * s], [-0.75, s]] {
        for sign in [1.0, -1.0] {
            let q = [sign * p[0], sign * p[1]];
            ensure(min.contains(&hex, &q, TOL), || format!("{q:?} missing from m_T"))?;
        }
    }
    let r = euclidean_dichotomy(&hex, 1, SEED, TOL).map_err(err)?;
    ensure(r.notes.contains("M_T not ⊥_B m_T"), || format!("dichotomy notes: {}", r.notes))
}

fn criterion_3() -> Check {
    let r = check_nonsmooth_counterexample(TOL).map_err(err)?;
    ensure(r.pass, || format!("counterexample: {}", r.notes))?;
    let r = check_linf_asymmetry(TOL).map_err(err)?;
    ensure(r.pass, || format!("remark operator: {}", r.notes))
}

/// Singular values of `T` between Gram spaces: those of `L₂ᵀ A L₁⁻ᵀ`.
fn svd_oracle(op: &Operator) -> Vec<f64> {
    let to_na = |m: &Matrix| DMatrix::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j));
    let g1 = to_na(op.domain().gram().unwrap().matrix());
    let g2 = to_na(op.codomain().gram().unwrap().matrix());
    let l1 = g1.cholesky().unwrap().l();
    let l2 = g2.cholesky().unwrap().l();
    let l1t_inv = l1.transpose().try_inverse().unwrap();
    let b = l2.transpose() * to_na(op.matrix()) * l1t_inv;
    let mut s: Vec<f64> = b.svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(f64::total_cmp);
    s
}

fn criterion_4() -> Check {
    let mut profiled = 0;
    for i in 0..100u64 {
        let mut rng = substream(SEED, 1000 + i);
        let n = 2 + (i as usize) % 4;
        let dom = NormSpace::inner_product(random_gram(&mut rng, n)).map_err(err)?;
        let cod = NormSpace::inner_product(random_gram(&mut rng, n)).map_err(err)?;
        let op = if i % 2 == 0 {
            Operator::new(gaussian_matrix(&mut rng, n, n), dom, cod).map_err(err)?
        } else {
            // repeated least singular value
            let mut s: Vec<f64> = (0..n).map(|_| uniform(&mut rng, 1.5, 3.0)).collect();
            let k = 1 + (i as usize / 2) % (n - 1);
            for v in s.iter_mut().take(k) {
                *v = 1.0;
            }
            let a = operator_with_singular_values(&dom, &cod, &s, &mut rng).map_err(err)?;
            Operator::new(a, dom, cod).map_err(err)?
        };
        let max = attain_hilbert(&op, Mode::Max, TOL).map_err(err)?;
        let min = attain_hilbert(&op, Mode::Min, TOL).map_err(err)?;
        let s = svd_oracle(&op);
        let (smin, smax) = (s[0], s[n - 1]);
        ensure(near(max.value, smax, 1e-10 * smax.max(1.0)), || {
            format!("operator {i}: ‖T‖ = {} but σ_max = {smax}", max.value)
        })?;
        ensure(near(min.value, smin, 1e-10 * smax.max(1.0)), || {
            format!("operator {i}: m(T) = {} but σ_min = {smin}", min.value)
        })?;
        if n <= 3 {
            let samples = if n == 2 { 20_000 } else { 100_000 };
            let profile = oracle_profile(&op, samples).map_err(err)?;
            let hi = profile.iter().map(|p| p.norm_tx).fold(f64::NEG_INFINITY, f64::max);
            let lo = profile.iter().map(|p| p.norm_tx).fold(f64::INFINITY, f64::min);
            ensure(near(hi, max.value, 1e-3) && near(lo, min.value, 1e-3), || {
                format!("operator {i}: grid extremes [{lo}, {hi}] vs [{}, {}]", min.value, max.value)
            })?;
            profiled += 1;
        }
        for r in [
            check_mutual_orthogonality(&op, TOL).map_err(err)?,
            check_hilbert_min_characterization(&op, SEED + i, TOL).map_err(err)?,
            check_dimension_multiplicity(&op, TOL).map_err(err)?,
        ] {
            ensure(r.pass, || format!("operator {i}: {} failed: {}", r.theorem_id, r.notes))?;
        }
    }
    ensure(profiled == 50, || format!("{profiled} operators profiled"))
}

fn criterion_5() -> Check {
    for (k, entry) in corpus().iter().enumerate() {
        for mode in [Mode::Max, Mode::Min] {
            let r = check_sip_characterization(&entry.operator, mode, 200, 50, SEED + k as u64, TOL).map_err(err)?;
            ensure(r.pass && r.max_residual <= 1e-8, || {
                format!("{} ({}): {} (residual {:e})", entry.name, mode.as_str(), r.notes, r.max_residual)
            })?;
        }
    }
    Ok(())
}

fn criterion_6() -> Check {
    let mut checked = 0;
    for (k, entry) in corpus().iter().enumerate() {
        let op = &entry.operator;
        if op.is_zero() {
            continue;
        }
        let min = attain(op, Mode::Min, &opts()).map_err(err)?;
        for x in min.representatives(op.domain()) {
            let r = check_preservation(op, &x, 10_000, SEED + k as u64, TOL).map_err(err)?;
            ensure(r.pass, || format!("{} at {x:?}: {}", entry.name, r.notes))?;
            checked += 1;
        }
    }
    ensure(checked > 0, || "no members checked".into())
}

fn criterion_7() -> Check {
    for p in [3.0, 4.0] {
        let space = NormSpace::lp(2, p).map_err(err)?;
        let mut tested = 0u64;
        let mut i = 0u64;
        while tested < 25 {
            let m = gaussian_matrix(&mut substream(SEED, 2000 + i), 2, 2);
            i += 1;
            let op = Operator::endo(m, space.clone()).map_err(err)?;
            let r = check_cardinality_bound(&op, 32, SEED + i, TOL).map_err(err)?;
            if !r.applicable {
                continue;
            }
            tested += 1;
            ensure(r.pass, || format!("p = {p}, operator {i}: {}", r.notes))?;
            let set = attain(&op, Mode::Max, &opts()).map_err(err)?;
            let scan = oracle_profile(&op, 100_000).map_err(err)?;
            let best = scan.iter().map(|s| s.norm_tx).fold(f64::NEG_INFINITY, f64::max);
            ensure(near(set.value, best, 1e-5), || format!("p = {p}, operator {i}: ‖T‖ = {} vs scan {best}", set.value))?;
            for x in set.representatives(op.domain()) {
                let v = op.image_norm(&x);
                ensure(near(v, best, 1e-5), || format!("p = {p}, operator {i}: witness {x:?} gives {v}, scan {best}"))?;
            }
        }
    }
    Ok(())
}

fn criterion_8() -> Check {
    let spaces = [NormSpace::euclidean(2), NormSpace::euclidean(3), NormSpace::lp(2, 3.0).map_err(err)?];
    for space in &spaces {
        let n = space.dim();
        for i in 0..20u64 {
            let normal = gaussian_vector(&mut substream(SEED, 3000 + i), n);
            let h = Hyperspace::from_normal(&normal).map_err(err)?;
            let r = check_reflexive_construct(space, &h, SEED + i, TOL).map_err(err)?;
            ensure(r.pass, || format!("dim {n}, hyperspace {i}: {}", r.notes))?;

            // m_T is exactly H ∩ S: every member lies in H and the set has the
            // dimension of H.
            let c = construct_rank_one_for_hyperspace(space, &h, TOL).map_err(err)?;
            let max = attain(&c.operator, Mode::Max, &opts()).map_err(err)?;
            let min = attain(&c.operator, Mode::Min, &opts()).map_err(err)?;
            let tol = if min.approximate { APPROX_POINT_TOL } else { TOL };
            let scale = normal.iter().map(|v| v * v).sum::<f64>().sqrt();
            for u in min.representatives(space) {
                ensure(dot(&normal, &u).abs() <= tol * scale, || format!("dim {n}, hyperspace {i}: {u:?} not in H"))?;
            }
            let dim_ok = match n {
                2 => min.cardinality() == Some(2),
                _ => min.subspace_dim(space) == Some(n - 1),
            };
            ensure(dim_ok, || format!("dim {n}, hyperspace {i}: m_T = {:?}", min.form))?;
            let tol = if max.approximate { APPROX_POINT_TOL } else { TOL };
            ensure(max.cardinality() == Some(2) && max.contains(space, &c.x, tol), || {
                format!("dim {n}, hyperspace {i}: M_T = {:?}, x = {:?}", max.form, c.x)
            })?;
        }
    }
    Ok(())
}

fn criterion_9() -> Check {
    let hex = NormSpace::regular_hexagon();
    match find_asymmetry_witness(&hex, 1000, SEED, TOL).map_err(err)? {
        Some((x, y)) => {
            println!("    witness: x = {x:?}, y = {y:?}");
            Ok(())
        }
        None => Err("no x ⊥_B y with ¬(y ⊥_B x) in 1000 samples; the hexagon norm is Radon, so none exists".into()),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (1, "hexagon example A: sets and values", Duration::from_secs(1), criterion_1),
        (2, "hexagon example B: sets, values, dichotomy failure", Duration::from_secs(1), criterion_2),
        (3, "sup-norm counterexample and one-sided orthogonality", Duration::from_secs(1), criterion_3),
        (4, "Hilbert suite on 100 random operators", Duration::from_secs(30), criterion_4),
        (5, "s.i.p. certification across the corpus", Duration::from_secs(10), criterion_5),
        (6, "preservation with 10^4 directions per member", Duration::from_secs(30), criterion_6),
        (7, "cardinality bound on lp^2, p = 3, 4", Duration::from_secs(60), criterion_7),
        (8, "rank-one construction for random hyperspaces", Duration::from_secs(10), criterion_8),
        (9, "asymmetry witness on the hexagon", Duration::from_secs(5), criterion_9),
    ];
    let mut unexpected = 0;
    for (n, name, limit, run) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let result = result.and_then(|()| {
            ensure(elapsed <= limit, || format!("took {:.2} s, limit {} s", elapsed.as_secs_f64(), limit.as_secs()))
        });
        let secs = elapsed.as_secs_f64();
        match result {
            Ok(()) => println!("criterion {n}: PASS {name} ({secs:.2} s)"),
            Err(why) => {
                let expected = EXPECTED_FAILURES.contains(&n);
                let tag = if expected { " [expected]" } else { "" };
                println!("criterion {n}: FAIL{tag} {name} ({secs:.2} s): {why}");
                if !expected {
                    unexpected += 1;
                }
            }
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
