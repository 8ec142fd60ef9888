//! Birkhoff-James orthogonality.
//!
//! `x ⊥_B y` is decided from the one-sided derivatives of `λ ↦ ‖x + λy‖` at
//! zero: `ρ₊(x, y) = max f(y)` and `ρ₋(x, y) = min f(y)` over the support
//! functionals `f` at `x`. Convexity of the norm makes `ρ₋ ≤ 0 ≤ ρ₊`
//! equivalent to orthogonality. Every decision is cross-checked by a
//! golden-section minimization of the same convex map.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg;
use crate::norm::{DualFunctional, NormSpace, SupportSet};
use crate::random::{seeded_rng, uniform};
use crate::search::golden_section;

/// Iterations of the golden-section cross-check.
pub const LINE_SEARCH_ITERATIONS: usize = 200;

/// Largest admissible gap `‖x‖ - min_λ ‖x + λy‖` for an orthogonal pair.
pub const MINIMUM_GAP_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DerivativePair {
    pub rho_minus: f64,
    pub rho_plus: f64,
}

impl DerivativePair {
    /// `0 ∈ [ρ₋ - tol, ρ₊ + tol]`
    pub fn contains_zero(&self, tol: f64) -> bool {
        self.rho_minus <= tol && self.rho_plus >= -tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cone {
    Plus,
    Minus,
}

/// Evidence for an orthogonality verdict.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OrthogonalityCertificate {
    pub orthogonal: bool,
    pub rho_minus: f64,
    pub rho_plus: f64,
    /// Minimizer of `λ ↦ ‖x + λy‖`; reported as 0 for orthogonal pairs.
    pub lambda_star: f64,
    pub min_value: f64,
}

/// A hyperspace `ker f` with an explicit basis.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Hyperspace {
    pub normal: Vec<f64>,
    pub basis: Vec<Vec<f64>>,
}

impl Hyperspace {
    /// Kernel of a nonzero covector. Basis vectors are `e_j - (f_j / f_k) e_k`
    /// for the pivot `k = argmax |f_k|`, each flipped to its lexicographically
    /// positive sign.
    pub fn from_normal(normal: &[f64]) -> Result<Self> {
        if linalg::max_abs(normal) == 0.0 {
            return Err(Error::ZeroFunctional);
        }
        let dim = normal.len();
        let mut pivot = 0;
        for (i, v) in normal.iter().enumerate() {
            if v.abs() > normal[pivot].abs() {
                pivot = i;
            }
        }
        let basis = (0..dim)
            .filter(|&j| j != pivot)
            .map(|j| {
                let mut h = linalg::unit_basis(dim, j);
                h[pivot] = -normal[j] / normal[pivot];
                linalg::antipodal_representative(&h)
            })
            .collect();
        Ok(Hyperspace { normal: normal.to_vec(), basis })
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    /// `|f(v)| ≤ tol · ‖f‖∞ · ‖v‖∞`
    pub fn contains(&self, v: &[f64], tol: f64) -> bool {
        linalg::dot(&self.normal, v).abs() <= tol * linalg::max_abs(&self.normal) * linalg::max_abs(v).max(1e-300)
    }
}

/// One-sided derivatives of `λ ↦ ‖x + λy‖` at `λ = 0` for unit `x`.
pub fn directional_derivatives(space: &NormSpace, x: &[f64], y: &[f64], tol: f64) -> Result<DerivativePair> {
    space.check_dim(y)?;
    let support = space.support_set(x, tol)?;
    Ok(derivatives_from_support(&support, y))
}

pub(crate) fn derivatives_from_support(support: &SupportSet, y: &[f64]) -> DerivativePair {
    let (rho_minus, rho_plus) = support.range(y);
    DerivativePair { rho_minus, rho_plus }
}

/// Decides `x ⊥_B y` for unit `x`.
///
/// The interval test accepts when `0 ∈ [ρ₋, ρ₊]` up to `tol · ‖y‖`. The
/// golden-section minimizer of `‖x + λy‖` over `|λ| ≤ 2‖x‖/‖y‖ + 1` must then
/// find no value below `‖x‖ - 1e-7`; otherwise the norm evaluation and the
/// support functionals disagree and an error is returned.
pub fn is_bj_orthogonal(space: &NormSpace, x: &[f64], y: &[f64], tol: f64) -> Result<OrthogonalityCertificate> {
    space.check_dim(y)?;
    let support = space.support_set(x, tol)?;
    orthogonality_with_support(space, x, &support, y, tol)
}

pub(crate) fn orthogonality_with_support(
    space: &NormSpace,
    x: &[f64],
    support: &SupportSet,
    y: &[f64],
    tol: f64,
) -> Result<OrthogonalityCertificate> {
    let x_norm = space.norm(x);
    let y_norm = space.norm(y);
    if y_norm == 0.0 {
        return Ok(OrthogonalityCertificate {
            orthogonal: true,
            rho_minus: 0.0,
            rho_plus: 0.0,
            lambda_star: 0.0,
            min_value: x_norm,
        });
    }
    let d = derivatives_from_support(support, y);
    let orthogonal = d.contains_zero(tol * y_norm);

    let radius = 2.0 * x_norm / y_norm + 1.0;
    let (lambda, min_value) =
        golden_section(|t| space.norm(&linalg::axpy(x, t, y)), -radius, radius, LINE_SEARCH_ITERATIONS);
    let gap = x_norm - min_value;
    if orthogonal && gap > MINIMUM_GAP_TOL * x_norm.max(1.0) {
        return Err(Error::InternalInconsistency(format!(
            "derivative interval [{}, {}] contains 0 but min ‖x + λy‖ = {min_value} < ‖x‖ = {x_norm} at λ = {lambda}",
            d.rho_minus, d.rho_plus
        )));
    }
    Ok(OrthogonalityCertificate {
        orthogonal,
        rho_minus: d.rho_minus,
        rho_plus: d.rho_plus,
        lambda_star: if orthogonal { 0.0 } else { lambda },
        min_value: if orthogonal { x_norm } else { min_value },
    })
}

/// `y ∈ x⁺` (`‖x + λy‖ ≥ ‖x‖` for `λ ≥ 0`) or `y ∈ x⁻` (for `λ ≤ 0`).
pub fn cone_membership(space: &NormSpace, x: &[f64], y: &[f64], cone: Cone, tol: f64) -> Result<bool> {
    let d = directional_derivatives(space, x, y, tol)?;
    let slack = tol * space.norm(y);
    Ok(match cone {
        Cone::Plus => d.rho_plus >= -slack,
        Cone::Minus => d.rho_minus <= slack,
    })
}

/// `ker f` for a support functional `f` at unit `x`: the given selector, or
/// the midpoint of the support set.
pub fn orthogonal_hyperspace(
    space: &NormSpace,
    x: &[f64],
    selector: Option<&DualFunctional>,
    tol: f64,
) -> Result<Hyperspace> {
    let support = space.support_set(x, tol)?;
    let f = match selector {
        Some(f) => {
            space.check_dim(f.covector())?;
            check_supporting(space, x, f, tol)?;
            f.clone()
        }
        None => support.canonical(),
    };
    Hyperspace::from_normal(f.covector())
}

/// Fails unless `f(x) = 1 ± tol` and `‖f‖* = 1 ± tol`.
pub fn check_supporting(space: &NormSpace, x: &[f64], f: &DualFunctional, tol: f64) -> Result<()> {
    let value = f.apply(x);
    let dual_norm = space.dual_norm(f.covector());
    if (value - 1.0).abs() > tol || (dual_norm - 1.0).abs() > tol {
        return Err(Error::NotSupporting { value, dual_norm });
    }
    Ok(())
}

/// A unit vector `x` with `f(x) = ‖f‖*`.
///
/// Polygons scan their vertices; when an entire edge norms `f` the edge
/// midpoint is returned. ℓ1/ℓ∞ break ties towards the lexicographically
/// largest extreme point; smooth spaces use the analytic dual map.
pub fn norming_point(space: &NormSpace, f: &[f64], tol: f64) -> Result<Vec<f64>> {
    space.check_dim(f)?;
    if linalg::max_abs(f) == 0.0 {
        return Err(Error::ZeroFunctional);
    }
    let x = match space {
        NormSpace::Polygon(poly) => {
            let verts = poly.vertices();
            let values: Vec<f64> = verts.iter().map(|v| f[0] * v[0] + f[1] * v[1]).collect();
            let top = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let slack = tol * top.abs().max(1.0);
            let n = verts.len();
            let best: Vec<usize> = (0..n).filter(|&i| values[i] >= top - slack).collect();
            match best.as_slice() {
                [i] => verts[*i].to_vec(),
                [0, j] if *j == n - 1 => linalg::lerp(&verts[n - 1], &verts[0], 0.5),
                [i, j] if *j == i + 1 => linalg::lerp(&verts[*i], &verts[*j], 0.5),
                _ => verts[best[0]].to_vec(),
            }
        }
        NormSpace::Lp { p, dim } => {
            use crate::norm::Exponent;
            match p {
                Exponent::Infinity => f.iter().map(|c| if *c < 0.0 { -1.0 } else { 1.0 }).collect(),
                Exponent::Finite(p) if *p == 1.0 => {
                    let top = linalg::max_abs(f);
                    let mut candidates: Vec<Vec<f64>> = (0..*dim)
                        .filter(|&i| f[i].abs() >= top - tol * top)
                        .map(|i| {
                            let mut e = linalg::unit_basis(*dim, i);
                            e[i] = f[i].signum();
                            e
                        })
                        .collect();
                    candidates.sort_by(|a, b| linalg::lex_cmp(b, a));
                    candidates.swap_remove(0)
                }
                Exponent::Finite(p) => {
                    let q = p / (p - 1.0);
                    let raw: Vec<f64> = f.iter().map(|c| libm::copysign(libm::pow(c.abs(), q - 1.0), *c)).collect();
                    space.normalize(&raw)?
                }
            }
        }
        NormSpace::InnerProduct(g) => space.normalize(&g.solve(f))?,
    };
    Ok(x)
}

/// Random search for `x ⊥_B y` with `¬(y ⊥_B x)`.
///
/// Each sample draws a unit `x`, a random support functional `f` at `x` and a
/// unit `y ∈ ker f`, so `x ⊥_B y` holds by construction; the sample is a
/// witness when the reverse test fails.
pub fn find_asymmetry_witness(
    space: &NormSpace,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<Option<(Vec<f64>, Vec<f64>)>> {
    let mut rng = seeded_rng(seed);
    for _ in 0..samples {
        let x = space.random_unit_vector_with(&mut rng);
        let support = space.support_set(&x, tol)?;
        let extremes = support.extremes();
        let weights: Vec<f64> = extremes.iter().map(|_| uniform(&mut rng, 0.0, 1.0)).collect();
        let total: f64 = weights.iter().sum();
        let mut f = alloc::vec![0.0; space.dim()];
        for (w, e) in weights.iter().zip(&extremes) {
            for (fi, ei) in f.iter_mut().zip(e.covector()) {
                *fi += w / total * ei;
            }
        }
        let h = Hyperspace::from_normal(&f)?;
        let mut y = alloc::vec![0.0; space.dim()];
        for b in &h.basis {
            y = linalg::axpy(&y, uniform(&mut rng, -1.0, 1.0), b);
        }
        if space.norm(&y) == 0.0 {
            continue;
        }
        let y = space.normalize(&y)?;
        let forward = orthogonality_with_support(space, &x, &support, &y, tol)?;
        if !forward.orthogonal {
            continue;
        }
        if !is_bj_orthogonal(space, &y, &x, tol)?.orthogonal {
            return Ok(Some((x, y)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_TOL;
    use alloc::vec;
    use approx::assert_abs_diff_eq;

    fn s3() -> f64 {
        libm::sqrt(3.0)
    }

    fn linf() -> NormSpace {
        NormSpace::sup(2).unwrap()
    }

    #[test]
    fn directional_derivative_examples() {
        let d = directional_derivatives(&linf(), &[1.0, 1.0], &[0.0, 1.0], DEFAULT_TOL).unwrap();
        assert_eq!((d.rho_minus, d.rho_plus), (0.0, 1.0));
        let d = directional_derivatives(&NormSpace::euclidean(2), &[1.0, 0.0], &[0.0, 1.0], DEFAULT_TOL).unwrap();
        assert_eq!((d.rho_minus, d.rho_plus), (0.0, 0.0));
        let hex = NormSpace::regular_hexagon();
        let d = directional_derivatives(&hex, &[-0.5, s3() / 2.0], &[0.75, s3() / 4.0], DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(d.rho_minus, -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(d.rho_plus, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn directional_derivatives_reject_non_unit() {
        let r = directional_derivatives(&linf(), &[2.0, 1.0], &[0.0, 1.0], DEFAULT_TOL);
        assert!(matches!(r, Err(Error::NotUnit { .. })));
    }

    #[test]
    fn orthogonality_examples() {
        assert!(is_bj_orthogonal(&linf(), &[1.0, 1.0], &[0.0, 1.0], DEFAULT_TOL).unwrap().orthogonal);
        let c = is_bj_orthogonal(&linf(), &[0.0, 1.0], &[-0.5, 0.5], DEFAULT_TOL).unwrap();
        assert!(!c.orthogonal);
        assert!(c.min_value < 1.0);
        let hex = NormSpace::regular_hexagon();
        let c = is_bj_orthogonal(&hex, &[0.0, s3() / 2.0], &[1.0, 0.0], DEFAULT_TOL).unwrap();
        assert!(c.orthogonal);
        assert_eq!(c.lambda_star, 0.0);
        assert_eq!(c.min_value, 1.0);
    }

    #[test]
    fn zero_direction_is_orthogonal_to_everything() {
        let hex = NormSpace::regular_hexagon();
        let x = [0.5, s3() / 2.0];
        assert!(is_bj_orthogonal(&hex, &x, &[0.0, 0.0], DEFAULT_TOL).unwrap().orthogonal);
        assert!(cone_membership(&hex, &x, &[0.0, 0.0], Cone::Plus, DEFAULT_TOL).unwrap());
        assert!(cone_membership(&hex, &x, &[0.0, 0.0], Cone::Minus, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn cone_membership_examples() {
        let e = NormSpace::euclidean(2);
        assert!(cone_membership(&e, &[1.0, 0.0], &[1.0, 0.0], Cone::Plus, DEFAULT_TOL).unwrap());
        assert!(!cone_membership(&e, &[1.0, 0.0], &[1.0, 0.0], Cone::Minus, DEFAULT_TOL).unwrap());
        assert!(cone_membership(&linf(), &[1.0, 1.0], &[0.0, 1.0], Cone::Plus, DEFAULT_TOL).unwrap());
        assert!(cone_membership(&linf(), &[1.0, 1.0], &[0.0, 1.0], Cone::Minus, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn hyperspace_examples() {
        let h = orthogonal_hyperspace(&NormSpace::euclidean(2), &[1.0, 0.0], None, DEFAULT_TOL).unwrap();
        assert_eq!(h.basis, vec![vec![0.0, 1.0]]);
        let f = DualFunctional::new(vec![0.5, 0.5]);
        let h = orthogonal_hyperspace(&linf(), &[1.0, 1.0], Some(&f), DEFAULT_TOL).unwrap();
        assert_eq!(h.basis, vec![vec![1.0, -1.0]]);
        let h = orthogonal_hyperspace(&NormSpace::regular_hexagon(), &[0.0, s3() / 2.0], None, DEFAULT_TOL).unwrap();
        assert_eq!(h.basis, vec![vec![1.0, 0.0]]);
    }

    #[test]
    fn hyperspace_rejects_non_supporting_selector() {
        let f = DualFunctional::new(vec![1.0, 0.0]);
        let r = orthogonal_hyperspace(&NormSpace::euclidean(2), &[0.0, 1.0], Some(&f), DEFAULT_TOL);
        assert!(matches!(r, Err(Error::NotSupporting { .. })));
    }

    #[test]
    fn norming_point_examples() {
        let hex = NormSpace::regular_hexagon();
        assert_eq!(norming_point(&hex, &[1.0, 0.0], DEFAULT_TOL).unwrap(), vec![1.0, 0.0]);
        assert_eq!(norming_point(&NormSpace::euclidean(2), &[0.0, 1.0], DEFAULT_TOL).unwrap(), vec![0.0, 1.0]);
        let l1 = NormSpace::lp(2, 1.0).unwrap();
        assert_eq!(norming_point(&l1, &[1.0, 1.0], DEFAULT_TOL).unwrap(), vec![1.0, 0.0]);
        // a whole edge norms (0, 1): its midpoint is returned
        let x = norming_point(&hex, &[0.0, 1.0], DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(x[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(x[1], s3() / 2.0, epsilon = 1e-15);
        assert_eq!(norming_point(&hex, &[0.0, 0.0], DEFAULT_TOL), Err(Error::ZeroFunctional));
    }

    #[test]
    fn l3_norming_point_is_analytic() {
        let l3 = NormSpace::lp(2, 3.0).unwrap();
        let f = [0.3, -0.8];
        let x = norming_point(&l3, &f, DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(l3.norm(&x), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(linalg::dot(&f, &x), l3.dual_norm(&f), epsilon = 1e-14);
    }

    #[test]
    fn sup_norm_has_asymmetric_pairs() {
        let w = find_asymmetry_witness(&linf(), 1000, 3, DEFAULT_TOL).unwrap();
        let (x, y) = w.expect("l-infinity orthogonality is not symmetric");
        assert!(is_bj_orthogonal(&linf(), &x, &y, DEFAULT_TOL).unwrap().orthogonal);
        assert!(!is_bj_orthogonal(&linf(), &y, &x, DEFAULT_TOL).unwrap().orthogonal);
    }

    #[test]
    fn regular_hexagon_orthogonality_is_symmetric() {
        // the regular hexagon is a Radon curve
        let w = find_asymmetry_witness(&NormSpace::regular_hexagon(), 5000, 11, DEFAULT_TOL).unwrap();
        assert_eq!(w, None);
    }

    #[test]
    fn euclidean_orthogonality_matches_inner_product() {
        let g = NormSpace::inner_product(crate::linalg::Matrix::from_rows(&[vec![2.0, 0.5], vec![0.5, 1.0]]).unwrap())
            .unwrap();
        let x = g.normalize(&[1.0, 1.0]).unwrap();
        // y with ⟨x, y⟩_G = 0
        let gx = g.gram().unwrap().matrix().apply(&x);
        let y = [gx[1], -gx[0]];
        assert!(is_bj_orthogonal(&g, &x, &y, DEFAULT_TOL).unwrap().orthogonal);
        assert!(!is_bj_orthogonal(&g, &x, &[1.0, 0.0], DEFAULT_TOL).unwrap().orthogonal);
    }
}
