use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::{TheoremId, TheoremReport, Witness};
use crate::attain::{self, attain, isometry_verdict, AttainOptions, AttainmentSet, Mode, Operator, SetForm};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::norm::{Exponent, NormSpace};
use crate::ortho::{derivatives_from_support, is_bj_orthogonal, norming_point, Hyperspace};
use crate::random::{gaussian_vector, random_orthogonal, seeded_rng, uniform};
use crate::sip::certify_with_value;

/// Coordinate tolerance when comparing points returned by the multi-start
/// solver, which certifies values to `tol` but locates flat extrema only to
/// about `sqrt(tol)`.
pub const APPROX_POINT_TOL: f64 = 1e-6;

/// Probes for the sampled isometry test on spaces without an exact one.
const ISOMETRY_PROBES: usize = 1000;

pub(super) fn options(tol: f64, seed: u64) -> AttainOptions {
    AttainOptions { tol, seed, ..AttainOptions::default() }
}

fn point_tol(set: &AttainmentSet, tol: f64) -> f64 {
    if set.approximate {
        APPROX_POINT_TOL
    } else {
        tol
    }
}

/// Unit `x` with `‖Tx‖` equal to the attained value, normalized.
fn require_member(op: &Operator, x: &[f64], mode: Mode, value: f64, tol: f64) -> Result<Vec<f64>> {
    let dom = op.domain();
    dom.check_unit(x, tol)?;
    let x = dom.normalize(x)?;
    let c = op.image_norm(&x);
    if (c - value).abs() > tol * value.max(1.0) {
        return Err(match mode {
            Mode::Max => Error::NotInMaxSet { image_norm: c, operator_norm: value },
            Mode::Min => Error::NotInMinSet { image_norm: c, minimum: value },
        });
    }
    Ok(x)
}

/// Verdict and distance of 0 from the derivative interval, relative to `‖y‖`.
pub(super) fn orthogonality_residual(space: &NormSpace, x: &[f64], y: &[f64], tol: f64) -> Result<(bool, f64)> {
    let ny = space.norm(y);
    if ny == 0.0 {
        return Ok((true, 0.0));
    }
    let cert = is_bj_orthogonal(space, x, y, tol)?;
    let gap = cert.rho_minus.max(-cert.rho_plus).max(0.0) / ny;
    Ok((cert.orthogonal, gap))
}

fn random_combination<R: Rng + ?Sized>(rng: &mut R, basis: &[Vec<f64>], dim: usize) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    for b in basis {
        v = linalg::axpy(&v, uniform(rng, -1.0, 1.0), b);
    }
    v
}

/// `x ∈ M_T` gives hyperspaces `H_x ⊥_B`-orthogonal to `x` and `H_y` to `Tx`
/// with `T(H_x) ⊆ H_y`: `H_y = ker g` for a support functional `g` at
/// `Tx/‖Tx‖` and `H_x = ker(g ∘ T)`.
pub fn check_hyperspace_lemma(op: &Operator, x: &[f64], seed: u64, tol: f64) -> Result<TheoremReport> {
    let set = attain(op, Mode::Max, &options(tol, seed))?;
    let x = require_member(op, x, Mode::Max, set.value, tol)?;
    let (dom, cod) = (op.domain(), op.codomain());
    let mut r = TheoremReport::new(TheoremId::LemmaHyperspace);
    r.witnesses.push(Witness::new("x", &x));
    let tx = op.apply(&x);
    let c = cod.norm(&tx);
    if c <= tol {
        r.note("T = 0, every hyperspace works");
        return Ok(r);
    }
    let v = linalg::scale(&tx, 1.0 / c);
    let g = cod.support_set(&v, tol)?.canonical();
    let hy = Hyperspace::from_normal(g.covector())?;
    let hx = Hyperspace::from_normal(&op.matrix().apply_transpose(g.covector()))?;
    r.witnesses.push(Witness::new("g", g.covector()));
    r.witnesses.push(Witness::new("normal of H_x", &hx.normal));

    let mut rng = seeded_rng(seed);
    let n = dom.dim();
    let mut dirs = hx.basis.clone();
    dirs.extend((0..20).map(|_| random_combination(&mut rng, &hx.basis, n)));
    let mut failures = 0;
    for h in &dirs {
        let (ok, gap) = orthogonality_residual(dom, &x, h, tol)?;
        r.residual(gap);
        let th = op.apply(h);
        let leak = g.apply(&th).abs() / linalg::max_abs(&th).max(1.0);
        r.residual(leak);
        if !ok || leak > tol {
            failures += 1;
            if failures == 1 {
                r.witnesses.push(Witness::new("h in H_x", h));
            }
        }
    }
    let m = cod.dim();
    let mut targets = hy.basis.clone();
    targets.extend((0..20).map(|_| random_combination(&mut rng, &hy.basis, m)));
    for k in &targets {
        let (ok, gap) = orthogonality_residual(cod, &v, k, tol)?;
        r.residual(gap);
        if !ok {
            failures += 1;
        }
    }
    r.pass = failures == 0 && r.max_residual <= tol;
    r.note(&format!("{} directions of H_x, {} of H_y, {failures} failures", dirs.len(), targets.len()));
    Ok(r)
}

/// The ℓ∞² counterexample: `T(1,1) = (0,1)`, `T(-1,1) = (-1,0)`,
/// `x = (1,1)`, `H = span{(0,1)}`.
pub fn check_nonsmooth_counterexample(tol: f64) -> Result<TheoremReport> {
    check_nonsmooth_counterexample_with(&NormSpace::sup(2)?, tol)
}

/// Same operator and vectors measured in another planar norm.
pub fn check_nonsmooth_counterexample_with(space: &NormSpace, tol: f64) -> Result<TheoremReport> {
    if space.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: space.dim() });
    }
    let m = Matrix::from_rows(&[vec![0.5, -0.5], vec![0.5, 0.5]])?;
    let op = Operator::endo(m, space.clone())?;
    let set = attain(&op, Mode::Max, &options(tol, 0))?;
    let x = space.normalize(&[1.0, 1.0])?;
    let h = [0.0, 1.0];
    let mut r = TheoremReport::new(TheoremId::RemarkNonsmooth);

    let c = op.image_norm(&x);
    let in_max = (c - set.value).abs() <= tol * set.value.max(1.0);
    r.residual((c - set.value).abs());
    let (x_perp_h, _) = orthogonality_residual(space, &x, &h, tol)?;
    let tx = op.apply(&x);
    let th = op.apply(&h);
    let u = space.normalize(&tx)?;
    let (tx_perp_th, _) = orthogonality_residual(space, &u, &th, tol)?;

    r.witnesses.push(Witness::new("x", &x));
    r.witnesses.push(Witness::new("H = span", &h));
    r.witnesses.push(Witness::new("Tx", &tx));
    r.witnesses.push(Witness::new("Th", &th));
    r.note(&format!("x in M_T: {in_max}"));
    r.note(&format!("x ⊥_B H: {x_perp_h}"));
    r.note(&format!("Tx ⊥_B T(H): {tx_perp_th}"));
    r.pass = in_max && x_perp_h && !tx_perp_th;
    if !r.pass {
        r.note("not a counterexample here");
    }
    Ok(r)
}

/// `x ∈ m_T` maps `x⁺`, `x⁻` and `x^⊥` into `(Tx)⁺`, `(Tx)⁻` and `(Tx)^⊥`.
///
/// Half of the directions are Gaussian, the other half lie in the kernel of a
/// random support functional at `x`, where the cones meet.
pub fn check_preservation(op: &Operator, x: &[f64], trials: usize, seed: u64, tol: f64) -> Result<TheoremReport> {
    if op.is_zero() {
        return Err(Error::InvalidArgument("the preservation theorem needs T != 0".into()));
    }
    let set = attain(op, Mode::Min, &options(tol, seed))?;
    let x = require_member(op, x, Mode::Min, set.value, tol)?;
    let (dom, cod) = (op.domain(), op.codomain());
    let mut r = TheoremReport::new(TheoremId::Preserve);
    r.witnesses.push(Witness::new("x", &x));
    let tx = op.apply(&x);
    let c = cod.norm(&tx);
    if c <= tol * set.value.max(1.0) {
        r.note("Tx = 0, every target cone is the whole codomain");
        return Ok(r);
    }
    let sx = dom.support_set(&x, tol)?;
    let su = cod.support_set(&linalg::scale(&tx, 1.0 / c), tol)?;
    let extremes = sx.extremes();
    let n = dom.dim();
    let mut rng = seeded_rng(seed);
    let (mut plus, mut minus, mut perp, mut failures) = (0usize, 0usize, 0usize, 0usize);
    for i in 0..trials {
        let y = if i % 2 == 0 {
            gaussian_vector(&mut rng, n)
        } else {
            let weights: Vec<f64> = extremes.iter().map(|_| uniform(&mut rng, 0.0, 1.0)).collect();
            let total: f64 = weights.iter().sum();
            let mut f = vec![0.0; n];
            for (w, e) in weights.iter().zip(&extremes) {
                f = linalg::axpy(&f, w / total, e.covector());
            }
            let h = Hyperspace::from_normal(&f)?;
            random_combination(&mut rng, &h.basis, n)
        };
        let ny = dom.norm(&y);
        if ny == 0.0 {
            continue;
        }
        let dx = derivatives_from_support(&sx, &y);
        let in_plus = dx.rho_plus >= -tol * ny;
        let in_minus = dx.rho_minus <= tol * ny;
        let ty = op.apply(&y);
        let nty = cod.norm(&ty);
        let du = derivatives_from_support(&su, &ty);
        let slack = tol * nty.max(ny);
        let mut bad = false;
        if in_plus {
            plus += 1;
            let v = (-du.rho_plus).max(0.0);
            r.residual(v / nty.max(ny));
            bad |= v > slack;
        }
        if in_minus {
            minus += 1;
            let v = du.rho_minus.max(0.0);
            r.residual(v / nty.max(ny));
            bad |= v > slack;
        }
        if in_plus && in_minus {
            perp += 1;
        }
        if bad {
            failures += 1;
            if failures == 1 {
                r.witnesses.push(Witness::new("y", &y));
                r.witnesses.push(Witness::new("Ty", &ty));
            }
        }
    }
    r.pass = failures == 0;
    r.note(&format!("{trials} directions: {plus} in x+, {minus} in x-, {perp} in x^perp, {failures} failures"));
    Ok(r)
}

fn inner_grams(op: &Operator) -> Result<(&crate::norm::Gram, &crate::norm::Gram)> {
    match (op.domain().gram(), op.codomain().gram()) {
        (Some(g1), Some(g2)) => Ok((g1, g2)),
        _ => Err(Error::Unsupported("this check needs inner-product domain and codomain".into())),
    }
}

/// `x ∈ m_T` iff `⟨Tx, Ty⟩ = m(T)² ⟨x, y⟩` for every `y`.
pub fn check_hilbert_min_characterization(op: &Operator, seed: u64, tol: f64) -> Result<TheoremReport> {
    let (g1, g2) = inner_grams(op)?;
    let dom = op.domain();
    let n = dom.dim();
    let min = attain::attain_hilbert(op, Mode::Min, tol)?;
    let max = attain::attain_hilbert(op, Mode::Max, tol)?;
    let v2 = min.value * min.value;
    let scale = max.value.max(1.0) * max.value.max(1.0);
    let residual = |x: &[f64]| -> f64 {
        let tx = op.apply(x);
        (0..n)
            .map(|j| {
                let y = linalg::unit_basis(n, j);
                (g2.inner(&tx, &op.apply(&y)) - v2 * g1.inner(x, &y)).abs() / scale
            })
            .fold(0.0, f64::max)
    };
    let mut r = TheoremReport::new(TheoremId::HilbertMin);
    let mut members = min.representatives(dom);
    members.extend(min.sample_members(dom, 5, seed));
    for x in &members {
        r.residual(residual(x));
    }
    let forward = r.max_residual <= tol;

    let mut rng = seeded_rng(seed);
    let (mut tested, mut missed) = (0usize, 0usize);
    for _ in 0..1000 {
        if tested == 20 {
            break;
        }
        let x = dom.random_unit_vector_with(&mut rng);
        if (op.image_norm(&x) - min.value).abs() <= 1e-6 {
            continue;
        }
        tested += 1;
        if residual(&x) <= tol {
            missed += 1;
            if missed == 1 {
                r.witnesses.push(Witness::new("non-member satisfying the identity", &x));
            }
        }
    }
    r.pass = forward && missed == 0;
    r.note(&format!("m(T) = {}, {} members checked, {tested} non-members, {missed} accepted", min.value, members.len()));
    Ok(r)
}

/// `dim m_T` (as a subspace) equals the geometric multiplicity of the least
/// eigenvalue of `T*T`.
///
/// The multiplicity is recomputed independently of the solver: `λ_min` from
/// a singular value decomposition and the multiplicity as the nullity of
/// `AᵀG₂A - λ_min G₁`.
pub fn check_dimension_multiplicity(op: &Operator, tol: f64) -> Result<TheoremReport> {
    let (g1, g2) = inner_grams(op)?;
    let dom = op.domain();
    let n = dom.dim();
    let min = attain::attain_hilbert(op, Mode::Min, tol)?;
    let dim = min.subspace_dim(dom);

    let a = op.matrix();
    let m = a.transpose().mul(&g2.matrix().mul(a));
    // C = L⁻¹ M L⁻ᵀ has the spectrum of T*T
    let half: Vec<Vec<f64>> = (0..n).map(|j| g1.solve_lower(&m.column(j))).collect();
    let half = Matrix::from_columns(&half)?;
    let full: Vec<Vec<f64>> = (0..n).map(|j| g1.solve_lower(half.row(j))).collect();
    let c = Matrix::from_columns(&full)?;
    let svd = c.to_nalgebra().svd(false, false);
    let lambda_min = svd.singular_values.iter().cloned().fold(f64::INFINITY, f64::min);
    let lambda_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);

    let mut shifted = m.clone();
    for i in 0..n {
        for j in 0..n {
            shifted.set(i, j, m.get(i, j) - lambda_min * g1.matrix().get(i, j));
        }
    }
    let g_scale = g1.matrix().to_nalgebra().svd(false, false).singular_values.iter().cloned().fold(0.0, f64::max);
    let threshold = attain::EIGEN_CLUSTER_RELTOL * (lambda_max * g_scale).max(f64::MIN_POSITIVE);
    let nullity = shifted.to_nalgebra().svd(false, false).singular_values.iter().filter(|s| **s <= threshold).count();

    let mut r = TheoremReport::new(TheoremId::Dimension);
    r.pass = dim == Some(nullity);
    r.residual(if r.pass { 0.0 } else { 1.0 });
    r.note(&format!("dim m_T = {dim:?}, multiplicity of least eigenvalue {lambda_min} = {nullity}"));
    Ok(r)
}

/// `|M_T| ≤ 4(4p - 3)` on ℓp² for integer `p ≥ 2` and `T` not a multiple
/// of an isometry.
pub fn check_cardinality_bound(op: &Operator, restarts: usize, seed: u64, tol: f64) -> Result<TheoremReport> {
    let p = match (op.domain(), op.codomain()) {
        (NormSpace::Lp { dim: 2, p: Exponent::Finite(p) }, NormSpace::Lp { dim: 2, p: Exponent::Finite(q) })
            if p == q =>
        {
            *p
        }
        _ => return Err(Error::Unsupported("the cardinality bound is stated for T: lp^2 -> lp^2".into())),
    };
    if p < 2.0 || libm::trunc(p) != p {
        return Err(Error::InvalidArgument(format!("the cardinality bound needs an integer p >= 2, got {p}")));
    }
    let iso = isometry_verdict(op, ISOMETRY_PROBES, seed, tol);
    if iso.is_multiple {
        return Ok(TheoremReport::not_applicable(
            TheoremId::Cardinality,
            &format!("T is a scalar multiple of an isometry ({}, spread {:e})", iso.method, iso.spread),
        ));
    }
    let set = attain(op, Mode::Max, &AttainOptions { tol, restarts, seed })?;
    let bound = 4 * (4 * p as usize - 3);
    let mut r = TheoremReport::new(TheoremId::Cardinality);
    for x in set.representatives(op.domain()) {
        r.witnesses.push(Witness::new("x in M_T", &x));
    }
    match set.cardinality() {
        Some(count) => {
            r.pass = count % 2 == 0 && count <= bound;
            r.note(&format!("|M_T| = {count}, bound 4(4p-3) = {bound}, ‖T‖ = {}", set.value));
        }
        None => {
            r.pass = false;
            r.note("M_T is infinite");
        }
    }
    Ok(r)
}

/// `m_T ⊆ (M_T)^⊥` for inner-product spaces: every basis pair is orthogonal
/// in the domain inner product.
pub fn check_mutual_orthogonality(op: &Operator, tol: f64) -> Result<TheoremReport> {
    let (g1, _) = inner_grams(op)?;
    let iso = isometry_verdict(op, 0, 0, tol);
    if iso.is_multiple {
        return Ok(TheoremReport::not_applicable(TheoremId::MutualOrth, "T is a scalar multiple of an isometry"));
    }
    let dom = op.domain();
    let max = attain::attain_hilbert(op, Mode::Max, tol)?;
    let min = attain::attain_hilbert(op, Mode::Min, tol)?;
    let mut r = TheoremReport::new(TheoremId::MutualOrth);
    for x in max.representatives(dom) {
        for y in min.representatives(dom) {
            let ip = g1.inner(&x, &y).abs();
            if ip > r.max_residual {
                r.witnesses = vec![Witness::new("x in M_T", &x), Witness::new("y in m_T", &y)];
            }
            r.residual(ip);
        }
    }
    r.pass = r.max_residual <= tol;
    if r.pass {
        r.witnesses.clear();
    }
    r.note(&format!("‖T‖ = {}, m(T) = {}", max.value, min.value));
    Ok(r)
}

fn pairs_match(set: &AttainmentSet, space: &NormSpace, expected: &[f64], ptol: f64) -> bool {
    set.cardinality() == Some(2) && set.contains(space, expected, ptol)
}

/// `m_T` equals `ker f ∩ S` as a symbolic set.
fn kernel_matches(set: &AttainmentSet, space: &NormSpace, f: &[f64], ptol: f64) -> Result<Option<bool>> {
    let n = space.dim();
    let unit_f = linalg::scale(f, 1.0 / linalg::max_abs(f));
    if n == 2 {
        let h = space.normalize(&Hyperspace::from_normal(f)?.basis[0])?;
        return Ok(Some(pairs_match(set, space, &h, ptol)));
    }
    Ok(match &set.form {
        SetForm::SubspaceSphere { basis } => {
            Some(basis.len() == n - 1 && basis.iter().all(|b| linalg::dot(&unit_f, b).abs() <= ptol))
        }
        _ if set.approximate => None,
        _ => Some(false),
    })
}

/// Rank-one `T z = f(z) y` on a strictly convex space: `M_T = {±x}` for the
/// norming point `x` of `f`, and `m_T = ker f ∩ S`.
pub fn check_rank_one(space: &NormSpace, f: &[f64], y: &[f64], seed: u64, tol: f64) -> Result<TheoremReport> {
    space.check_dim(f)?;
    space.check_dim(y)?;
    if linalg::max_abs(f) == 0.0 {
        return Err(Error::ZeroFunctional);
    }
    let y = space.normalize(y)?;
    let n = space.dim();
    let rows: Vec<Vec<f64>> = (0..n).map(|i| linalg::scale(f, y[i])).collect();
    let op = Operator::endo(Matrix::from_rows(&rows)?, space.clone())?;
    let opts = options(tol, seed);
    let max = attain(&op, Mode::Max, &opts)?;
    let min = attain(&op, Mode::Min, &opts)?;
    let x = norming_point(space, f, tol)?;
    let dual = space.dual_norm(f);

    let mut r = TheoremReport::new(TheoremId::RankOne);
    r.witnesses.push(Witness::new("norming point x", &x));
    for m in max.representatives(space) {
        r.witnesses.push(Witness::new("observed M_T", &m));
    }
    r.residual((max.value - dual).abs() / dual.max(1.0));
    r.residual(min.value / dual.max(1.0));
    let values_ok = r.max_residual <= tol;
    let max_ok = pairs_match(&max, space, &x, point_tol(&max, tol));
    let min_ok = kernel_matches(&min, space, f, point_tol(&min, tol))?;
    r.note(&format!("‖T‖ = {} (‖f‖* = {dual}), m(T) = {}", max.value, min.value));
    r.note(&format!("M_T = {{±x}}: {max_ok}"));
    match min_ok {
        Some(ok) => r.note(&format!("m_T = ker f ∩ S: {ok}")),
        None => r.note("m_T from the multi-start solver is a point sample; equality with ker f ∩ S not decided"),
    }
    r.pass = values_ok && max_ok && min_ok.unwrap_or(true);
    if !space.properties().strictly_convex {
        r.applicable = false;
        r.note(&format!("hypothesis violated: the space is not strictly convex, observed M_T form {:?}", max.form));
    }
    Ok(r)
}

/// The rank-one operator behind the reflexivity construction.
#[derive(Debug, Clone, PartialEq)]
pub struct RankOneConstruction {
    pub operator: Operator,
    /// Norming point of the normal of `H`; `T x = x`.
    pub x: Vec<f64>,
}

/// `T(αx + h) = αx` for `h ∈ H`, i.e. `T z = (f(z) / f(x)) x` with `x` the
/// norming point of the normal `f` of `H`.
pub fn construct_rank_one_for_hyperspace(space: &NormSpace, h: &Hyperspace, tol: f64) -> Result<RankOneConstruction> {
    space.check_dim(&h.normal)?;
    let f = &h.normal;
    let x = norming_point(space, f, tol)?;
    let fx = linalg::dot(f, &x);
    let n = space.dim();
    let rows: Vec<Vec<f64>> = (0..n).map(|i| linalg::scale(f, x[i] / fx)).collect();
    let operator = Operator::endo(Matrix::from_rows(&rows)?, space.clone())?;
    Ok(RankOneConstruction { operator, x })
}

/// The construction yields `x ∈ M_T` with `‖T‖ = 1` and `H ∩ S ⊆ m_T`;
/// strictly convex spaces also give `M_T = {±x}` and `m_T = H ∩ S`.
pub fn check_reflexive_construct(space: &NormSpace, h: &Hyperspace, seed: u64, tol: f64) -> Result<TheoremReport> {
    let RankOneConstruction { operator: op, x } = construct_rank_one_for_hyperspace(space, h, tol)?;
    let opts = options(tol, seed);
    let max = attain(&op, Mode::Max, &opts)?;
    let min = attain(&op, Mode::Min, &opts)?;
    let mut r = TheoremReport::new(TheoremId::ReflexiveConstruct);
    r.witnesses.push(Witness::new("x", &x));
    r.witnesses.push(Witness::new("normal of H", &h.normal));
    r.residual((max.value - 1.0).abs());
    r.residual((op.image_norm(&x) - 1.0).abs());
    r.residual(min.value);
    let mut ok = r.max_residual <= tol;

    let x_in_max = max.contains(space, &x, point_tol(&max, tol));
    let mut rng = seeded_rng(seed);
    let mut kernel = h.basis.clone();
    kernel.extend((0..5).map(|_| random_combination(&mut rng, &h.basis, space.dim())));
    let mut kernel_in_min = true;
    for k in &kernel {
        if linalg::max_abs(k) == 0.0 {
            continue;
        }
        let u = space.normalize(k)?;
        if !min.contains(space, &u, point_tol(&min, tol)) {
            kernel_in_min = false;
            r.witnesses.push(Witness::new("h in H outside m_T", &u));
            break;
        }
    }
    ok &= x_in_max && kernel_in_min;
    r.note(&format!("x in M_T: {x_in_max}, H ∩ S ⊆ m_T: {kernel_in_min}"));
    if space.properties().strictly_convex {
        let max_eq = pairs_match(&max, space, &x, point_tol(&max, tol));
        let min_eq = kernel_matches(&min, space, &h.normal, point_tol(&min, tol))?;
        r.note(&format!("M_T = {{±x}}: {max_eq}"));
        match min_eq {
            Some(eq) => r.note(&format!("m_T = H ∩ S: {eq}")),
            None => r.note("m_T = H ∩ S not decided for a sampled solver output"),
        }
        ok &= max_eq && min_eq.unwrap_or(true);
    }
    r.pass = ok;
    Ok(r)
}

/// Every computed member of `M_T` (max) or `m_T` (min) is certified by the
/// semi-inner-product identity, and random non-members are rejected.
pub fn check_sip_characterization(
    op: &Operator,
    mode: Mode,
    samples: usize,
    nonmembers: usize,
    seed: u64,
    tol: f64,
) -> Result<TheoremReport> {
    let id = match mode {
        Mode::Max => TheoremId::SipMax,
        Mode::Min => TheoremId::SipMin,
    };
    let dom = op.domain();
    let set = attain(op, mode, &options(tol, seed))?;
    let mut r = TheoremReport::new(id);
    let mut members = set.representatives(dom);
    if matches!(set.form, SetForm::Segments { .. } | SetForm::SubspaceSphere { .. } | SetForm::WholeSphere) {
        members.extend(set.sample_members(dom, 5, seed));
    }
    let mut rejected_members = 0;
    for (i, x) in members.iter().enumerate() {
        let cert = certify_with_value(op, x, mode, set.value, samples, seed.wrapping_add(i as u64), tol)?;
        r.residual(cert.residual_max);
        if !cert.pass {
            rejected_members += 1;
            r.witnesses.push(Witness::new("member not certified", x));
        }
    }

    let mut rng = seeded_rng(seed);
    let (mut tested, mut accepted) = (0usize, 0usize);
    for _ in 0..(50 * nonmembers.max(1)) {
        if tested == nonmembers {
            break;
        }
        let x = dom.random_unit_vector_with(&mut rng);
        if (op.image_norm(&x) - set.value).abs() <= 1e-6 {
            continue;
        }
        tested += 1;
        let passes = match certify_with_value(op, &x, mode, set.value, samples, seed, tol) {
            Ok(cert) => cert.pass,
            Err(Error::NotInMaxSet { .. } | Error::NotInMinSet { .. }) => false,
            Err(e) => return Err(e),
        };
        if passes {
            accepted += 1;
            r.witnesses.push(Witness::new("non-member certified", &x));
        }
    }
    r.pass = rejected_members == 0 && accepted == 0;
    r.note(&format!(
        "{} = {}, {} members ({rejected_members} rejected), {tested} non-members ({accepted} accepted)",
        if mode == Mode::Max { "‖T‖" } else { "m(T)" },
        set.value,
        members.len()
    ));
    Ok(r)
}

/// A matrix whose operator between the two inner-product spaces has the
/// given singular values: `A = L₂⁻ᵀ U S Vᵀ L₁ᵀ` with random orthogonal `U`,
/// `V` and Cholesky factors `L₁`, `L₂` of the Gram matrices.
pub fn operator_with_singular_values<R: Rng + ?Sized>(
    domain: &NormSpace,
    codomain: &NormSpace,
    singular_values: &[f64],
    rng: &mut R,
) -> Result<Matrix> {
    let (Some(g1), Some(g2)) = (domain.gram(), codomain.gram()) else {
        return Err(Error::Unsupported("singular values are prescribed between inner-product spaces".into()));
    };
    let (n, m) = (domain.dim(), codomain.dim());
    if singular_values.len() != n.min(m) {
        return Err(Error::DimensionMismatch { expected: n.min(m), found: singular_values.len() });
    }
    let u = random_orthogonal(rng, m);
    let v = random_orthogonal(rng, n);
    let mut s = Matrix::zeros(m, n);
    for (i, sv) in singular_values.iter().enumerate() {
        s.set(i, i, *sv);
    }
    let k = u.mul(&s).mul(&v.transpose()).mul(&g1.cholesky_lower().transpose());
    let cols: Vec<Vec<f64>> = (0..n).map(|j| g2.solve_upper(&k.column(j))).collect();
    Matrix::from_columns(&cols)
}
