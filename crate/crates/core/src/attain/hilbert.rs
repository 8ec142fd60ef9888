use alloc::vec::Vec;

use super::{canonical_basis, AttainmentSet, Mode, Operator, SetForm, EIGEN_CLUSTER_RELTOL};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::norm::Gram;

/// `B = L₂ᵀ A L₁⁻ᵀ`: the operator in coordinates orthonormal for both Gram
/// matrices, so that `‖Tx‖ = |B y|` with `y = L₁ᵀ x`.
pub(crate) fn whitened(a: &Matrix, g1: &Gram, g2: &Gram) -> (Matrix, Matrix) {
    let n = g1.dim();
    let cols: Vec<Vec<f64>> = (0..n).map(|j| g1.solve_upper(&crate::linalg::unit_basis(n, j))).collect();
    let l1_inv_t = Matrix::from_columns(&cols).expect("square factor");
    (g2.cholesky_lower().transpose().mul(a).mul(&l1_inv_t), l1_inv_t)
}

fn grams(op: &Operator) -> Result<(&Gram, &Gram)> {
    match (op.domain().gram(), op.codomain().gram()) {
        (Some(g1), Some(g2)) => Ok((g1, g2)),
        _ => Err(Error::Unsupported("the eigenvalue solver needs inner-product domain and codomain".into())),
    }
}

/// Eigenvalues of `T*T` in ascending order (Gram spaces only; empty otherwise).
pub fn hilbert_spectrum(op: &Operator) -> Vec<f64> {
    let Ok((g1, g2)) = grams(op) else {
        return Vec::new();
    };
    let (b, _) = whitened(op.matrix(), g1, g2);
    let btb = b.transpose().mul(&b).to_nalgebra();
    let mut ev: Vec<f64> = btb.symmetric_eigen().eigenvalues.iter().cloned().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Exact `M_T` / `m_T` between inner-product spaces.
///
/// Solves `AᵀG₂A v = λ G₁ v`; the value is the square root of the extreme
/// eigenvalue and the set is the unit sphere of its eigenspace. Eigenvalues
/// within a relative `1e-8` of the extreme one count as the same eigenvalue.
pub fn attain_hilbert(op: &Operator, mode: Mode, _tol: f64) -> Result<AttainmentSet> {
    let (g1, g2) = grams(op)?;
    let n = g1.dim();
    let (b, l1_inv_t) = whitened(op.matrix(), g1, g2);
    let eig = b.transpose().mul(&b).to_nalgebra().symmetric_eigen();
    let values: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
    let extreme = match mode {
        Mode::Max => values.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        Mode::Min => values.iter().cloned().fold(f64::INFINITY, f64::min),
    };
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let cutoff = EIGEN_CLUSTER_RELTOL * scale.max(f64::MIN_POSITIVE);
    let members: Vec<usize> = (0..n).filter(|&i| (values[i] - extreme).abs() <= cutoff).collect();
    // |B w| is accurate near zero where sqrt(λ) is not
    let ext = members
        .iter()
        .cloned()
        .min_by(|&i, &j| (values[i] - extreme).abs().total_cmp(&(values[j] - extreme).abs()))
        .expect("extreme eigenvalue is a member");
    let w: Vec<f64> = eig.eigenvectors.column(ext).iter().cloned().collect();
    let value = crate::linalg::euclidean_norm(&b.apply(&w));

    let form = if members.len() == n {
        SetForm::WholeSphere
    } else {
        let vectors: Vec<Vec<f64>> = members
            .iter()
            .map(|&i| {
                let w: Vec<f64> = eig.eigenvectors.column(i).iter().cloned().collect();
                l1_inv_t.apply(&w)
            })
            .collect();
        let basis = canonical_basis(op.domain(), &vectors);
        if basis.len() == 1 {
            SetForm::FinitePairs { points: basis }
        } else {
            SetForm::SubspaceSphere { basis }
        }
    };
    Ok(AttainmentSet::new(mode, value, false, form, "generalized symmetric eigenproblem"))
}
