use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::checks::{options, orthogonality_residual};
use super::{TheoremId, TheoremReport, Witness};
use crate::attain::{attain, AttainOptions, AttainmentSet, Mode, Operator};
use crate::error::Result;
use crate::linalg::Matrix;
use crate::norm::{Exponent, NormSpace};
use crate::random::{gaussian_matrix, substream};

/// First pair `(a, b)` with `a ∈ A`, `b ∈ B` and `¬(a ⊥_B b)`, testing the
/// representatives of both sets (points, segment endpoints and midpoints,
/// subspace bases).
pub fn set_orthogonal(
    space: &NormSpace,
    a: &AttainmentSet,
    b: &AttainmentSet,
    tol: f64,
) -> Result<Option<(Vec<f64>, Vec<f64>)>> {
    let bs = b.representatives(space);
    for x in a.representatives(space) {
        for y in &bs {
            if !orthogonality_residual(space, &x, y, tol)?.0 {
                return Ok(Some((x, y.clone())));
            }
        }
    }
    Ok(None)
}

/// Which side of the dichotomy an operator lands on.
#[derive(Debug, Clone, PartialEq)]
pub struct DichotomyOutcome {
    /// (a): `M_T = m_T = S`.
    pub whole_sphere: bool,
    /// `M_T ⊥_B m_T`
    pub forward: bool,
    /// `m_T ⊥_B M_T`
    pub backward: bool,
    pub forward_witness: Option<(Vec<f64>, Vec<f64>)>,
    pub backward_witness: Option<(Vec<f64>, Vec<f64>)>,
    pub max: AttainmentSet,
    pub min: AttainmentSet,
}

impl DichotomyOutcome {
    /// (a) or (b).
    pub fn holds(&self) -> bool {
        self.whole_sphere || (self.forward && self.backward)
    }

    /// Exactly one of the two orthogonality relations fails.
    pub fn one_sided(&self) -> bool {
        !self.whole_sphere && self.forward != self.backward
    }

    pub fn describe(&self) -> &'static str {
        match (self.whole_sphere, self.forward, self.backward) {
            (true, _, _) => "M_T = m_T = S",
            (false, true, true) => "M_T ⊥_B m_T and m_T ⊥_B M_T",
            (false, false, true) => "M_T not ⊥_B m_T",
            (false, true, false) => "m_T not ⊥_B M_T",
            (false, false, false) => "M_T not ⊥_B m_T and m_T not ⊥_B M_T",
        }
    }
}

pub fn dichotomy_outcome(op: &Operator, opts: &AttainOptions) -> Result<DichotomyOutcome> {
    let max = attain(op, Mode::Max, opts)?;
    let min = attain(op, Mode::Min, opts)?;
    let space = op.domain();
    let whole_sphere = max.value - min.value <= opts.tol * max.value.max(1.0);
    let (forward_witness, backward_witness) = if whole_sphere {
        (None, None)
    } else {
        (set_orthogonal(space, &max, &min, opts.tol)?, set_orthogonal(space, &min, &max, opts.tol)?)
    };
    Ok(DichotomyOutcome {
        whole_sphere,
        forward: forward_witness.is_none(),
        backward: backward_witness.is_none(),
        forward_witness,
        backward_witness,
        max,
        min,
    })
}

/// Operator always tried first: the hexagon example for polygonal balls, the
/// coordinate projection for ℓ∞.
fn pinned_operator(space: &NormSpace) -> Option<Matrix> {
    let s3 = libm::sqrt(3.0);
    match space {
        NormSpace::Polygon(_) => Matrix::from_rows(&[vec![0.75, -s3 / 4.0], vec![s3 / 4.0, 0.75]]).ok(),
        NormSpace::Lp { dim, p: Exponent::Infinity } => {
            let mut d = vec![0.0; *dim];
            d[0] = 1.0;
            Some(Matrix::diag(&d))
        }
        _ => None,
    }
}

fn push_pair(r: &mut TheoremReport, tag: &str, pair: &Option<(Vec<f64>, Vec<f64>)>) {
    if let Some((a, b)) = pair {
        r.witnesses.push(Witness::new(format!("{tag}: first"), a));
        r.witnesses.push(Witness::new(format!("{tag}: second"), b));
    }
}

/// Tests "(a) or (b)" on `trials` operators of `space`.
///
/// Inner-product spaces must satisfy it for every operator. Any other space
/// is searched for a violation, which is what the characterization predicts;
/// one-sided and two-sided violations are counted separately.
pub fn euclidean_dichotomy(space: &NormSpace, trials: usize, seed: u64, tol: f64) -> Result<TheoremReport> {
    let n = space.dim();
    let id = if n == 2 { TheoremId::Euclidean2d } else { TheoremId::EuclideanNd };
    let mut r = TheoremReport::new(id);
    let pinned = pinned_operator(space);
    let search = !space.is_inner_product();
    let (mut holding, mut one_sided, mut two_sided) = (0usize, 0usize, 0usize);
    let mut first: Option<usize> = None;
    for i in 0..trials {
        let m = match (&pinned, i) {
            (Some(m), 0) => m.clone(),
            _ => gaussian_matrix(&mut substream(seed, i as u64), n, n),
        };
        let op = Operator::endo(m, space.clone())?;
        let out = dichotomy_outcome(&op, &options(tol, seed))?;
        if out.holds() {
            holding += 1;
            continue;
        }
        if out.one_sided() {
            one_sided += 1;
        } else {
            two_sided += 1;
        }
        if first.is_none() {
            first = Some(i);
            r.witnesses.push(Witness::matrix("T (row-major)", op.matrix()));
            push_pair(&mut r, "M_T not ⊥_B m_T", &out.forward_witness);
            push_pair(&mut r, "m_T not ⊥_B M_T", &out.backward_witness);
            r.note(&format!("trial {i}: {}", out.describe()));
        }
    }
    if search {
        r.pass = first.is_some();
        r.note(&format!(
            "search mode: {} violations in {trials} trials ({one_sided} one-sided, {two_sided} two-sided)",
            one_sided + two_sided
        ));
    } else {
        r.pass = first.is_none();
        r.residual((one_sided + two_sided) as f64);
        r.note(&format!("{holding}/{trials} pass"));
    }
    Ok(r)
}

/// On ℓ∞² the projection `T(x₁, x₂) = (x₁, 0)` has `M_T ⊥_B m_T` but not
/// `m_T ⊥_B M_T`.
pub fn check_linf_asymmetry(tol: f64) -> Result<TheoremReport> {
    let op = Operator::endo(Matrix::diag(&[1.0, 0.0]), NormSpace::sup(2)?)?;
    let out = dichotomy_outcome(&op, &options(tol, 0))?;
    let mut r = TheoremReport::new(TheoremId::RemarkLinfAsym);
    push_pair(&mut r, "m_T not ⊥_B M_T", &out.backward_witness);
    push_pair(&mut r, "M_T not ⊥_B m_T", &out.forward_witness);
    r.pass = out.forward && !out.backward;
    r.note(out.describe());
    Ok(r)
}
