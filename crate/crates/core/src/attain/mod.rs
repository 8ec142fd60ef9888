//! Operator norm `‖T‖`, minimum modulus `m(T)` and the sets `M_T`, `m_T`.
//!
//! Inner-product spaces are solved exactly through a generalized symmetric
//! eigenproblem, polygonal domains exactly through a vertex and edge scan.
//! Smooth domains (ℓp with `1 < p < ∞`, or Gram spaces mapping into a
//! non-Gram codomain) go through a multi-start projected gradient method
//! whose answers are flagged approximate.

mod hilbert;
mod oracle;
mod polygon;
mod set;
mod smooth;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::norm::{Exponent, NormSpace};
use crate::random::seeded_rng;

pub use hilbert::{attain_hilbert, hilbert_spectrum};
pub use oracle::{oracle_profile, ProfileSample};
pub use polygon::attain_polygon;
pub use set::{AttainmentSet, SetForm};
pub use smooth::{attain_lp, attain_smooth};

/// Which extreme of `x ↦ ‖Tx‖` on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "lowercase"))]
pub enum Mode {
    Max,
    Min,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Max => "max",
            Mode::Min => "min",
        }
    }

    /// `+1` for maximization, `-1` for minimization.
    pub(crate) fn sign(self) -> f64 {
        match self {
            Mode::Max => 1.0,
            Mode::Min => -1.0,
        }
    }
}

/// A matrix acting between two normed spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    matrix: Matrix,
    domain: NormSpace,
    codomain: NormSpace,
}

impl Operator {
    pub fn new(matrix: Matrix, domain: NormSpace, codomain: NormSpace) -> Result<Self> {
        if matrix.cols() != domain.dim() {
            return Err(Error::DimensionMismatch { expected: domain.dim(), found: matrix.cols() });
        }
        if matrix.rows() != codomain.dim() {
            return Err(Error::DimensionMismatch { expected: codomain.dim(), found: matrix.rows() });
        }
        Ok(Operator { matrix, domain, codomain })
    }

    /// Operator on a single space.
    pub fn endo(matrix: Matrix, space: NormSpace) -> Result<Self> {
        Operator::new(matrix, space.clone(), space)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn domain(&self) -> &NormSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &NormSpace {
        &self.codomain
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.matrix.apply(x)
    }

    /// `‖Tx‖`
    pub fn image_norm(&self, x: &[f64]) -> f64 {
        self.codomain.norm(&self.matrix.apply(x))
    }

    pub fn scaled(&self, t: f64) -> Operator {
        Operator { matrix: self.matrix.scaled(t), domain: self.domain.clone(), codomain: self.codomain.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttainOptions {
    pub tol: f64,
    /// Starts of the multi-start solver.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for AttainOptions {
    fn default() -> Self {
        AttainOptions { tol: crate::DEFAULT_TOL, restarts: 32, seed: 42 }
    }
}

/// Computes `M_T` (max) or `m_T` (min) with the best solver for the spaces.
pub fn attain(op: &Operator, mode: Mode, opts: &AttainOptions) -> Result<AttainmentSet> {
    if op.is_zero() {
        return Ok(AttainmentSet::new(mode, 0.0, false, SetForm::WholeSphere, "zero operator"));
    }
    if op.domain.is_inner_product() && op.codomain.is_inner_product() {
        return attain_hilbert(op, mode, opts.tol);
    }
    if op.domain.as_polygon().is_some() {
        return attain_polygon(op, mode, opts.tol);
    }
    if is_smooth_kind(&op.domain) {
        return attain_smooth(op, mode, opts.restarts, opts.seed, opts.tol);
    }
    Err(Error::Unsupported(format!(
        "no attainment solver for a {}-dimensional non-smooth domain that is not a polygon",
        op.domain.dim()
    )))
}

fn is_smooth_kind(space: &NormSpace) -> bool {
    match space {
        NormSpace::Lp { p: Exponent::Finite(p), .. } => *p > 1.0,
        NormSpace::InnerProduct(_) => true,
        _ => false,
    }
}

/// `‖T‖ = m(T)`, i.e. `T` is a scalar multiple of an isometry, with the
/// method used to decide it.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IsometryVerdict {
    pub is_multiple: bool,
    /// Decided exactly (eigenvalues or polygon scan) rather than by sampling.
    pub exact: bool,
    pub probes: usize,
    /// Spread `max ‖Tx‖ - min ‖Tx‖` that was observed.
    pub spread: f64,
    pub method: String,
}

pub fn is_scalar_isometry_multiple(op: &Operator, probes: usize, seed: u64, tol: f64) -> bool {
    isometry_verdict(op, probes, seed, tol).is_multiple
}

/// Gram spaces compare the extreme eigenvalues of `T*T`; polygonal domains
/// compare the exact `‖T‖` and `m(T)`; other spaces sample `probes` seeded
/// random unit vectors.
pub fn isometry_verdict(op: &Operator, probes: usize, seed: u64, tol: f64) -> IsometryVerdict {
    if op.domain.is_inner_product() && op.codomain.is_inner_product() {
        let spectrum = hilbert_spectrum(op);
        let hi = spectrum.iter().cloned().fold(0.0, f64::max);
        let lo = spectrum.iter().cloned().fold(f64::INFINITY, f64::min);
        return IsometryVerdict {
            is_multiple: hi - lo <= tol * hi.max(1.0),
            exact: true,
            probes: 0,
            spread: libm::sqrt(hi.max(0.0)) - libm::sqrt(lo.max(0.0)),
            method: "eigenvalues of T*T".into(),
        };
    }
    if op.domain.as_polygon().is_some() {
        if let (Ok(hi), Ok(lo)) = (attain_polygon(op, Mode::Max, tol), attain_polygon(op, Mode::Min, tol)) {
            let spread = hi.value - lo.value;
            return IsometryVerdict {
                is_multiple: spread <= tol * hi.value.max(1.0),
                exact: true,
                probes: 0,
                spread,
                method: "polygon vertex and edge scan".into(),
            };
        }
    }
    let mut rng = seeded_rng(seed);
    let (mut hi, mut lo) = (0.0f64, f64::INFINITY);
    for _ in 0..probes.max(1) {
        let x = op.domain.random_unit_vector_with(&mut rng);
        let v = op.image_norm(&x);
        hi = hi.max(v);
        lo = lo.min(v);
    }
    IsometryVerdict {
        is_multiple: hi - lo <= tol * hi.max(1.0),
        exact: false,
        probes: probes.max(1),
        spread: hi - lo,
        method: "random probes".into(),
    }
}

/// Relative tolerance for grouping eigenvalues into one eigenspace.
pub const EIGEN_CLUSTER_RELTOL: f64 = 1e-8;

/// Canonical basis of `span(vectors)`: reduced row echelon form of the
/// stacked vectors, each row rescaled to unit norm in `space` and made
/// lexicographically positive.
pub(crate) fn canonical_basis(space: &NormSpace, vectors: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = space.dim();
    let mut rows: Vec<Vec<f64>> = vectors.to_vec();
    let scale = rows.iter().map(|r| linalg::max_abs(r)).fold(0.0, f64::max);
    let eps = 1e-10 * scale.max(f64::MIN_POSITIVE);
    let mut pivot_row = 0;
    for col in 0..n {
        if pivot_row == rows.len() {
            break;
        }
        let best = (pivot_row..rows.len())
            .max_by(|&a, &b| rows[a][col].abs().total_cmp(&rows[b][col].abs()))
            .expect("nonempty range");
        if rows[best][col].abs() <= eps {
            continue;
        }
        rows.swap(pivot_row, best);
        let p = rows[pivot_row][col];
        rows[pivot_row] = linalg::scale(&rows[pivot_row], 1.0 / p);
        for r in 0..rows.len() {
            if r != pivot_row {
                let factor = rows[r][col];
                if factor != 0.0 {
                    rows[r] = linalg::axpy(&rows[r], -factor, &rows[pivot_row].clone());
                    rows[r][col] = 0.0;
                }
            }
        }
        pivot_row += 1;
    }
    rows.truncate(pivot_row);
    rows.into_iter()
        .map(|r| {
            let cleaned: Vec<f64> = r.iter().map(|c| if c.abs() <= 1e-14 { 0.0 } else { *c }).collect();
            let u = space.normalize(&cleaned).expect("nonzero echelon row");
            linalg::antipodal_representative(&u)
        })
        .collect()
}
