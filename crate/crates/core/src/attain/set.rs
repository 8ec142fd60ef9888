use alloc::string::String;
use alloc::vec::Vec;

use super::Mode;
use crate::linalg;
use crate::norm::NormSpace;
use crate::random::{seeded_rng, uniform};

/// Symbolic shape of an attainment set. Everything is symmetric under
/// `x ↦ -x`, so only one representative of each antipodal pair is stored.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(tag = "form"))]
pub enum SetForm {
    WholeSphere,
    /// Unit sphere of `span(basis)`.
    SubspaceSphere { basis: Vec<Vec<f64>> },
    FinitePairs { points: Vec<Vec<f64>> },
    /// Straight pieces of the unit sphere (polygon edges or parts of them)
    /// plus isolated points.
    Segments { segments: Vec<[Vec<f64>; 2]>, points: Vec<Vec<f64>> },
}

/// `M_T` or `m_T` together with the attained value.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AttainmentSet {
    pub mode: Mode,
    /// `‖T‖` or `m(T)`
    pub value: f64,
    /// Produced by the multi-start solver; no exactness claim.
    pub approximate: bool,
    #[cfg_attr(feature = "serde", serde(flatten))]
    pub form: SetForm,
    pub method: String,
}

impl AttainmentSet {
    pub fn new(mode: Mode, value: f64, approximate: bool, form: SetForm, method: &str) -> Self {
        AttainmentSet { mode, value, approximate, form, method: method.into() }
    }

    /// Number of points, `None` when the set is infinite.
    pub fn cardinality(&self) -> Option<usize> {
        match &self.form {
            SetForm::FinitePairs { points } => Some(2 * points.len()),
            SetForm::Segments { segments, points } if segments.is_empty() => Some(2 * points.len()),
            _ => None,
        }
    }

    /// Dimension of the subspace whose sphere this is (Gram solver output).
    pub fn subspace_dim(&self, space: &NormSpace) -> Option<usize> {
        match &self.form {
            SetForm::WholeSphere => Some(space.dim()),
            SetForm::SubspaceSphere { basis } => Some(basis.len()),
            SetForm::FinitePairs { points } if points.len() == 1 => Some(1),
            _ => None,
        }
    }

    /// Finite set of unit members that set-level tests run on: the points,
    /// segment endpoints and midpoints, or a subspace basis.
    pub fn representatives(&self, space: &NormSpace) -> Vec<Vec<f64>> {
        match &self.form {
            SetForm::WholeSphere => (0..space.dim())
                .map(|i| space.normalize(&linalg::unit_basis(space.dim(), i)).expect("basis vector"))
                .collect(),
            SetForm::SubspaceSphere { basis } => basis.clone(),
            SetForm::FinitePairs { points } => points.clone(),
            SetForm::Segments { segments, points } => {
                let mut out = Vec::new();
                for [a, b] in segments {
                    out.push(a.clone());
                    if let Ok(m) = space.normalize(&linalg::lerp(a, b, 0.5)) {
                        out.push(m);
                    }
                    out.push(b.clone());
                }
                out.extend(points.iter().cloned());
                out
            }
        }
    }

    /// Representatives together with their antipodes.
    pub fn expanded_representatives(&self, space: &NormSpace) -> Vec<Vec<f64>> {
        self.representatives(space).into_iter().flat_map(|x| [linalg::neg(&x), x]).collect()
    }

    /// Symbolic membership of a unit vector, coordinates compared to `tol`.
    pub fn contains(&self, space: &NormSpace, x: &[f64], tol: f64) -> bool {
        let near = |p: &[f64]| linalg::dist_inf(p, x) <= tol || linalg::dist_inf(&linalg::neg(p), x) <= tol;
        let hit = match &self.form {
            SetForm::WholeSphere => true,
            SetForm::SubspaceSphere { basis } => subspace_residual(basis, x) <= tol,
            SetForm::FinitePairs { points } => points.iter().any(|p| near(p)),
            SetForm::Segments { segments, points } => {
                points.iter().any(|p| near(p))
                    || segments.iter().any(|[a, b]| {
                        segment_distance(a, b, x) <= tol || segment_distance(a, b, &linalg::neg(x)) <= tol
                    })
            }
        };
        hit && (space.norm(x) - 1.0).abs() <= tol
    }

    /// Same symbolic set, coordinates compared to `tol`.
    pub fn same_set(&self, other: &AttainmentSet, space: &NormSpace, tol: f64) -> bool {
        match (&self.form, &other.form) {
            (SetForm::WholeSphere, SetForm::WholeSphere) => true,
            (SetForm::SubspaceSphere { basis: a }, SetForm::SubspaceSphere { basis: b }) => {
                a.len() == b.len()
                    && a.iter().all(|v| subspace_residual(b, v) <= tol)
                    && b.iter().all(|v| subspace_residual(a, v) <= tol)
            }
            (SetForm::FinitePairs { points: a }, SetForm::FinitePairs { points: b }) => {
                a.len() == b.len() && a.iter().all(|p| other.contains(space, p, tol))
                    && b.iter().all(|p| self.contains(space, p, tol))
            }
            (SetForm::Segments { segments: sa, points: pa }, SetForm::Segments { segments: sb, points: pb }) => {
                sa.len() == sb.len()
                    && pa.len() == pb.len()
                    && self.representatives(space).iter().all(|p| other.contains(space, p, tol))
                    && other.representatives(space).iter().all(|p| self.contains(space, p, tol))
            }
            _ => false,
        }
    }

    /// Random members, reproducible from `seed`.
    pub fn sample_members(&self, space: &NormSpace, count: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = seeded_rng(seed);
        let reps = self.representatives(space);
        (0..count)
            .map(|_| {
                let sign = if uniform(&mut rng, 0.0, 1.0) < 0.5 { -1.0 } else { 1.0 };
                let x = match &self.form {
                    SetForm::WholeSphere => space.random_unit_vector_with(&mut rng),
                    SetForm::SubspaceSphere { basis } => {
                        let mut v = alloc::vec![0.0; space.dim()];
                        for b in basis {
                            v = linalg::axpy(&v, crate::random::gaussian_vector(&mut rng, 1)[0], b);
                        }
                        space.normalize(&v).unwrap_or_else(|_| basis[0].clone())
                    }
                    SetForm::Segments { segments, .. } if !segments.is_empty() => {
                        let k = (uniform(&mut rng, 0.0, segments.len() as f64) as usize).min(segments.len() - 1);
                        let [a, b] = &segments[k];
                        let t = uniform(&mut rng, 0.0, 1.0);
                        space.normalize(&linalg::lerp(a, b, t)).expect("segment avoids the origin")
                    }
                    _ => {
                        let k = (uniform(&mut rng, 0.0, reps.len() as f64) as usize).min(reps.len() - 1);
                        reps[k].clone()
                    }
                };
                linalg::scale(&x, sign)
            })
            .collect()
    }
}

/// `‖x - P x‖∞` for the Euclidean projection `P` onto `span(basis)`.
pub(crate) fn subspace_residual(basis: &[Vec<f64>], x: &[f64]) -> f64 {
    let mut ortho: Vec<Vec<f64>> = Vec::new();
    for b in basis {
        let mut v = b.clone();
        for q in &ortho {
            v = linalg::axpy(&v, -linalg::dot(q, &v), q);
        }
        let n = linalg::euclidean_norm(&v);
        if n > 1e-12 {
            ortho.push(linalg::scale(&v, 1.0 / n));
        }
    }
    let mut r = x.to_vec();
    for q in &ortho {
        r = linalg::axpy(&r, -linalg::dot(q, &r), q);
    }
    linalg::max_abs(&r)
}

/// `min_{t ∈ [0,1]} ‖x - (a + t(b - a))‖∞` via the Euclidean foot point.
fn segment_distance(a: &[f64], b: &[f64], x: &[f64]) -> f64 {
    let d = linalg::sub(b, a);
    let dd = linalg::dot(&d, &d);
    let t = if dd == 0.0 { 0.0 } else { (linalg::dot(&linalg::sub(x, a), &d) / dd).clamp(0.0, 1.0) };
    linalg::dist_inf(&linalg::axpy(a, t, &d), x)
}
