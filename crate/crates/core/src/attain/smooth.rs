use alloc::vec::Vec;

use super::{AttainmentSet, Mode, Operator, SetForm};
use crate::error::{Error, Result};
use crate::linalg;
use crate::norm::{Exponent, NormSpace};
use crate::random::substream;
use crate::search::bisect_sign_change;

/// Random probes used to detect `x ↦ ‖Tx‖` being constant on the sphere.
pub const WHOLE_SPHERE_PROBES: usize = 100;
/// Iteration cap of one projected-gradient run.
pub const MAX_ITERATIONS: usize = 2000;
/// Converged points closer than this (up to sign) are one cluster.
pub const CLUSTER_RADIUS: f64 = 1e-6;

/// Multi-start solver for an ℓp domain with `1 < p < ∞`.
pub fn attain_lp(op: &Operator, mode: Mode, restarts: usize, seed: u64, tol: f64) -> Result<AttainmentSet> {
    match op.domain() {
        NormSpace::Lp { p: Exponent::Finite(p), .. } if *p > 1.0 => attain_smooth(op, mode, restarts, seed, tol),
        _ => Err(Error::Unsupported("attain_lp needs an lp domain with 1 < p < inf".into())),
    }
}

/// Multi-start projected gradient method for any smooth domain.
///
/// Each start follows `d = Tᵀg - ‖Tx‖ J(x)` (the gradient of
/// `‖Tx‖ / ‖x‖` at unit `x`, with `g` a support functional at `Tx` and `J` the
/// dual map of the domain) with Armijo backtracking, renormalizing after
/// every step. In the plane the result is polished by bisecting the sign
/// change of the angular derivative, which also pins down very flat extrema.
/// Converged points are clustered up to sign; clusters whose value is within
/// `tol / 4` (relative) of the best one are reported, which keeps every
/// reported point certifiable at `tol`.
pub fn attain_smooth(op: &Operator, mode: Mode, restarts: usize, seed: u64, tol: f64) -> Result<AttainmentSet> {
    if restarts == 0 {
        return Err(Error::InvalidArgument("restarts must be at least 1".into()));
    }
    let dom = op.domain();
    let mut probe_rng = substream(seed, 0);
    let probes: Vec<f64> =
        (0..WHOLE_SPHERE_PROBES).map(|_| op.image_norm(&dom.random_unit_vector_with(&mut probe_rng))).collect();
    let hi = probes.iter().cloned().fold(0.0, f64::max);
    let lo = probes.iter().cloned().fold(f64::INFINITY, f64::min);
    if hi - lo < tol * hi.max(1.0) {
        let value = if mode == Mode::Max { hi } else { lo };
        return Ok(AttainmentSet::new(mode, value, true, SetForm::WholeSphere, "random probes"));
    }

    let mut found: Vec<(Vec<f64>, f64)> = Vec::new();
    for i in 0..restarts {
        let start = dom.random_unit_vector_with(&mut substream(seed, i as u64 + 1));
        if let Some(run) = run_start(op, mode, start, tol) {
            found.push((linalg::antipodal_representative(&run.0), run.1));
        }
    }
    if found.is_empty() {
        return Err(Error::NoConvergence);
    }

    found.sort_by(|a, b| {
        let by_value = if mode == Mode::Max { b.1.total_cmp(&a.1) } else { a.1.total_cmp(&b.1) };
        by_value.then_with(|| linalg::lex_cmp(&a.0, &b.0))
    });
    let best = found[0].1;
    let mut centers: Vec<(Vec<f64>, f64)> = Vec::new();
    for (x, v) in found {
        let joined = centers.iter().any(|(c, _)| {
            linalg::dist_inf(c, &x) <= CLUSTER_RADIUS || linalg::dist_inf(&linalg::neg(c), &x) <= CLUSTER_RADIUS
        });
        if !joined {
            centers.push((x, v));
        }
    }
    let mut points: Vec<Vec<f64>> =
        centers.into_iter().filter(|(_, v)| (v - best).abs() <= 0.25 * tol * best.abs().max(1.0)).map(|(c, _)| c).collect();
    points.sort_by(|a, b| linalg::lex_cmp(a, b));
    Ok(AttainmentSet::new(mode, best, true, SetForm::FinitePairs { points }, "multi-start projected gradient"))
}

/// One start; `None` when it neither converges nor can be polished.
fn run_start(op: &Operator, mode: Mode, mut x: Vec<f64>, tol: f64) -> Option<(Vec<f64>, f64)> {
    let dom = op.domain();
    let cod = op.codomain();
    let s = mode.sign();
    let mut f = op.image_norm(&x);
    let mut eta: f64 = 1.0;
    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        let tx = op.apply(&x);
        let c = cod.norm(&tx);
        if c == 0.0 {
            converged = mode == Mode::Min;
            break;
        }
        let g = cod.support_set(&linalg::scale(&tx, 1.0 / c), tol).ok()?.canonical();
        let j = dom.support_set(&x, tol).ok()?.canonical();
        let d = linalg::axpy(&op.matrix().apply_transpose(g.covector()), -c, j.covector());
        let dn2 = linalg::dot(&d, &d);
        if libm::sqrt(dn2) <= 1e-13 * c.max(1.0) {
            converged = true;
            break;
        }
        eta = (eta * 4.0).min(1e6);
        let mut stepped = false;
        while eta > 1e-20 {
            if let Ok(xn) = dom.normalize(&linalg::axpy(&x, s * eta, &d)) {
                let fnew = op.image_norm(&xn);
                if s * (fnew - f) >= 1e-4 * eta * dn2 {
                    x = xn;
                    f = fnew;
                    stepped = true;
                    break;
                }
            }
            eta *= 0.5;
        }
        if !stepped {
            // no ascent direction left at working precision
            converged = true;
            break;
        }
    }
    let mut polished = false;
    if dom.dim() == 2 {
        if let Some((xp, fp)) = polish_planar(op, mode, &x, tol) {
            polished = true;
            if s * (fp - f) >= -1e-15 * f.max(1.0) {
                x = xp;
                f = fp;
            }
        }
    }
    (converged || polished).then_some((x, f))
}

/// Bisection on the angular derivative around `x`.
fn polish_planar(op: &Operator, mode: Mode, x: &[f64], tol: f64) -> Option<(Vec<f64>, f64)> {
    let dom = op.domain();
    let cod = op.codomain();
    let deriv = |theta: f64| -> f64 {
        let (sn, cs) = (libm::sin(theta), libm::cos(theta));
        let u = [cs, sn];
        let du = [-sn, cs];
        let nu = dom.norm(&u);
        let tu = op.apply(&u);
        let ntu = cod.norm(&tu);
        let Ok(j) = dom.support_set(&linalg::scale(&u, 1.0 / nu), tol) else {
            return 0.0;
        };
        let j = j.canonical();
        if ntu == 0.0 {
            return 0.0;
        }
        let Ok(g) = cod.support_set(&linalg::scale(&tu, 1.0 / ntu), tol) else {
            return 0.0;
        };
        let g = g.canonical();
        g.apply(&op.apply(&du)) / nu - ntu * j.apply(&du) / (nu * nu)
    };
    let theta0 = libm::atan2(x[1], x[0]);
    let s = mode.sign();
    for delta in [1e-9, 1e-7, 1e-5, 1e-3, 1e-1] {
        let (l, r) = (theta0 - delta, theta0 + delta);
        let (dl, dr) = (s * deriv(l), s * deriv(r));
        if dl >= 0.0 && dr <= 0.0 && (dl > 0.0 || dr < 0.0) {
            let theta = bisect_sign_change(|t| s * deriv(t), l, r, 200);
            let xp = dom.normalize(&[libm::cos(theta), libm::sin(theta)]).ok()?;
            let fp = op.image_norm(&xp);
            return Some((xp, fp));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::DEFAULT_TOL;
    use alloc::vec;
    use approx::assert_abs_diff_eq;

    #[test]
    fn l3_diagonal_has_a_single_maximizing_pair() {
        let l3 = NormSpace::lp(2, 3.0).unwrap();
        let op = Operator::endo(Matrix::diag(&[2.0, 1.0]), l3).unwrap();
        let s = attain_lp(&op, Mode::Max, 32, 42, DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(s.value, 2.0, epsilon = 1e-12);
        let SetForm::FinitePairs { points } = &s.form else { panic!("{:?}", s.form) };
        assert_eq!(points.len(), 1, "{points:?}");
        assert!(linalg::dist_inf(&points[0], &[1.0, 0.0]) < 1e-6);
        assert!(s.approximate);
    }

    #[test]
    fn isometry_is_whole_sphere() {
        let op = Operator::endo(Matrix::identity(2), NormSpace::lp(2, 3.0).unwrap()).unwrap();
        for mode in [Mode::Max, Mode::Min] {
            let s = attain_lp(&op, mode, 8, 1, DEFAULT_TOL).unwrap();
            assert_eq!(s.form, SetForm::WholeSphere);
            assert_abs_diff_eq!(s.value, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn rank_one_minimum_is_the_kernel() {
        let l3 = NormSpace::lp(2, 3.0).unwrap();
        let op = Operator::endo(Matrix::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap(), l3).unwrap();
        let s = attain_lp(&op, Mode::Min, 16, 3, DEFAULT_TOL).unwrap();
        assert!(s.value < 1e-12);
        let SetForm::FinitePairs { points } = &s.form else { panic!("{:?}", s.form) };
        assert_eq!(points.len(), 1, "{points:?}");
        assert!(linalg::dist_inf(&points[0], &[0.0, 1.0]) < 1e-9);
    }

    #[test]
    fn matches_the_euclidean_eigen_solver() {
        let e = NormSpace::euclidean(3);
        let m = Matrix::from_rows(&[vec![1.0, 0.2, 0.0], vec![0.3, 2.0, -0.4], vec![0.0, 0.5, 0.7]]).unwrap();
        let l2 = NormSpace::lp(3, 2.0).unwrap();
        let exact = super::super::attain_hilbert(&Operator::endo(m.clone(), e).unwrap(), Mode::Max, DEFAULT_TOL).unwrap();
        let approx = attain_lp(&Operator::endo(m, l2).unwrap(), Mode::Max, 16, 5, DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(exact.value, approx.value, epsilon = 1e-10);
    }

    #[test]
    fn rejects_non_smooth_domain() {
        let op = Operator::endo(Matrix::identity(3), NormSpace::sup(3).unwrap()).unwrap();
        assert!(matches!(attain_lp(&op, Mode::Max, 4, 1, DEFAULT_TOL), Err(Error::Unsupported(_))));
    }
}
