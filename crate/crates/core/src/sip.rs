//! Semi-inner-products built from a homogeneous choice of support
//! functionals, and attainment certificates derived from them.
//!
//! `[y, x] = ‖x‖ · f_{x/‖x‖}(y)` where `f_u` is the functional the selector
//! picks at the unit vector `u`. Pinned choices take precedence; `-u`
//! inherits `-f_u`; everything else gets the midpoint of its support set.

use alloc::vec::Vec;

use crate::attain::{self, AttainOptions, Mode, Operator};
use crate::error::{Error, Result};
use crate::linalg;
use crate::norm::{DualFunctional, NormSpace, SupportSet};
use crate::ortho::check_supporting;
use crate::random::{seeded_rng, uniform};
use crate::search::golden_section;

/// Default number of random `z` directions in a certificate.
pub const DEFAULT_SAMPLES: usize = 200;

/// Sparse support-functional selector.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Selector {
    pins: Vec<(Vec<f64>, DualFunctional)>,
}

impl Selector {
    /// Only the canonical midpoint rule.
    pub fn canonical() -> Self {
        Selector::default()
    }

    pub fn pins(&self) -> &[(Vec<f64>, DualFunctional)] {
        &self.pins
    }

    /// Pins `f` at the unit vector `key` (and `-f` at `-key`).
    ///
    /// Fails when `f` does not support `key`, or when `key` or `-key` already
    /// carries a different functional.
    pub fn pin(&mut self, space: &NormSpace, key: &[f64], f: DualFunctional, tol: f64) -> Result<()> {
        space.check_unit(key, tol)?;
        space.check_dim(f.covector())?;
        check_supporting(space, key, &f, tol)?;
        for (k, g) in &self.pins {
            if linalg::dist_inf(k, key) <= tol {
                if linalg::dist_inf(g.covector(), f.covector()) > tol {
                    return Err(Error::ConflictingPins);
                }
                return Ok(());
            }
            if linalg::dist_inf(k, &linalg::neg(key)) <= tol {
                if linalg::dist_inf(g.covector(), &linalg::neg(f.covector())) > tol {
                    return Err(Error::ConflictingPins);
                }
                return Ok(());
            }
        }
        self.pins.push((key.to_vec(), f));
        Ok(())
    }

    /// The functional chosen at a unit vector.
    pub fn functional_at(&self, space: &NormSpace, u: &[f64], tol: f64) -> Result<DualFunctional> {
        for (k, g) in &self.pins {
            if linalg::dist_inf(k, u) <= tol {
                return Ok(g.clone());
            }
            if linalg::dist_inf(k, &linalg::neg(u)) <= tol {
                return Ok(g.negated());
            }
        }
        Ok(space.support_set(u, tol)?.canonical())
    }
}

/// A semi-inner-product on `space`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sip<'a> {
    pub space: &'a NormSpace,
    pub selector: Selector,
    pub tol: f64,
}

impl<'a> Sip<'a> {
    pub fn canonical(space: &'a NormSpace, tol: f64) -> Self {
        Sip { space, selector: Selector::canonical(), tol }
    }

    pub fn with_selector(space: &'a NormSpace, selector: Selector, tol: f64) -> Self {
        Sip { space, selector, tol }
    }

    /// `[y, x]`
    pub fn eval(&self, y: &[f64], x: &[f64]) -> Result<f64> {
        self.space.check_dim(x)?;
        self.space.check_dim(y)?;
        let n = self.space.norm(x);
        if n == 0.0 {
            return Ok(0.0);
        }
        let u = linalg::scale(x, 1.0 / n);
        let f = self.selector.functional_at(self.space, &u, self.tol)?;
        Ok(n * f.apply(y))
    }
}

pub fn sip_eval(sip: &Sip<'_>, y: &[f64], x: &[f64]) -> Result<f64> {
    sip.eval(y, x)
}

/// Largest violation of each axiom over the sampled tuples.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SipAxiomReport {
    pub trials: usize,
    /// `|[x + y, z] - [x, z] - [y, z]|`
    pub additivity: f64,
    /// `|[t x, z] - t [x, z]|`
    pub first_slot_homogeneity: f64,
    /// `|[x, t z] - t [x, z]|`, `t` of either sign
    pub second_slot_homogeneity: f64,
    /// `|[x, x] - ‖x‖²|`
    pub norm_identity: f64,
    /// `max(0, -[x, x])` for nonzero `x`
    pub positivity: f64,
    /// `max(0, [x, y]² - [x, x][y, y])`
    pub cauchy_schwarz: f64,
}

impl SipAxiomReport {
    pub fn max_violation(&self) -> f64 {
        [
            self.additivity,
            self.first_slot_homogeneity,
            self.second_slot_homogeneity,
            self.norm_identity,
            self.positivity,
            self.cauchy_schwarz,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn verify_sip_axioms(sip: &Sip<'_>, trials: usize, seed: u64) -> Result<SipAxiomReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let space = sip.space;
    let mut rng = seeded_rng(seed);
    let mut r = SipAxiomReport {
        trials,
        additivity: 0.0,
        first_slot_homogeneity: 0.0,
        second_slot_homogeneity: 0.0,
        norm_identity: 0.0,
        positivity: 0.0,
        cauchy_schwarz: 0.0,
    };
    for _ in 0..trials {
        let x = linalg::scale(&space.random_unit_vector_with(&mut rng), uniform(&mut rng, 0.1, 3.0));
        let y = linalg::scale(&space.random_unit_vector_with(&mut rng), uniform(&mut rng, 0.1, 3.0));
        let z = linalg::scale(&space.random_unit_vector_with(&mut rng), uniform(&mut rng, 0.1, 3.0));
        let t = uniform(&mut rng, -3.0, 3.0);

        let xz = sip.eval(&x, &z)?;
        let yz = sip.eval(&y, &z)?;
        r.additivity = r.additivity.max((sip.eval(&linalg::add(&x, &y), &z)? - xz - yz).abs());
        r.first_slot_homogeneity = r.first_slot_homogeneity.max((sip.eval(&linalg::scale(&x, t), &z)? - t * xz).abs());
        r.second_slot_homogeneity =
            r.second_slot_homogeneity.max((sip.eval(&x, &linalg::scale(&z, t))? - t * xz).abs());
        let xx = sip.eval(&x, &x)?;
        let yy = sip.eval(&y, &y)?;
        let nx = space.norm(&x);
        r.norm_identity = r.norm_identity.max((xx - nx * nx).abs());
        r.positivity = r.positivity.max(-xx).max(0.0);
        let xy = sip.eval(&x, &y)?;
        r.cauchy_schwarz = r.cauchy_schwarz.max(xy * xy - xx * yy).max(0.0);
    }
    Ok(r)
}

/// Evidence that `x` lies in `M_T` or `m_T`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SipCertificate {
    pub mode: Mode,
    /// `‖T‖` or `m(T)`
    pub value: f64,
    /// `‖Tx‖`
    pub image_norm: f64,
    /// Largest `|[Tz, Tx]_Y - value² [z, x]_X|` over the checked `z`.
    pub residual_max: f64,
    pub z_basis_checked: bool,
    pub samples: usize,
    /// `‖g ∘ T‖* / ‖Tx‖`; at most 1 when the constructed functional supports `x`.
    pub psi_dual_norm: f64,
    /// `Tx = 0`: nothing to construct.
    pub degenerate: bool,
    pub pass: bool,
}

/// Certifies membership of `x` in `M_T` (max) or `m_T` (min).
///
/// Picks a support functional `g` at `Tx/‖Tx‖` making `ψ = (g ∘ T)/‖Tx‖` as
/// small as possible in the dual norm, pins `g` at `Tx/‖Tx‖` and `ψ` at `x`,
/// then evaluates `[Tz, Tx]_Y = value² [z, x]_X` on the standard basis, on
/// `x` and on `samples` random `z`.
pub fn certify_attainment_via_sip(
    op: &Operator,
    x: &[f64],
    mode: Mode,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<SipCertificate> {
    let opts = AttainOptions { tol, seed, ..AttainOptions::default() };
    let set = attain::attain(op, mode, &opts)?;
    certify_with_value(op, x, mode, set.value, samples, seed, tol)
}

/// As [`certify_attainment_via_sip`] with `‖T‖` or `m(T)` supplied.
pub fn certify_with_value(
    op: &Operator,
    x: &[f64],
    mode: Mode,
    value: f64,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<SipCertificate> {
    let (dom, cod) = (op.domain(), op.codomain());
    dom.check_unit(x, tol)?;
    let x = dom.normalize(x)?;
    let tx = op.apply(&x);
    let c = cod.norm(&tx);
    let scale = value.max(1.0);

    if c <= tol * scale {
        return match mode {
            Mode::Max if value > tol => Err(Error::NotInMaxSet { image_norm: c, operator_norm: value }),
            _ => Ok(SipCertificate {
                mode,
                value,
                image_norm: c,
                residual_max: c,
                z_basis_checked: false,
                samples: 0,
                psi_dual_norm: 0.0,
                degenerate: true,
                pass: value <= tol * scale,
            }),
        };
    }

    let v = linalg::scale(&tx, 1.0 / c);
    let support = cod.support_set(&v, tol)?;
    let g = smallest_pullback(op, &support);
    let psi = DualFunctional(linalg::scale(&op.matrix().apply_transpose(g.covector()), 1.0 / c));
    let psi_dual_norm = dom.dual_norm(psi.covector());
    let psi_valid = psi_dual_norm <= 1.0 + tol;

    let mut sel_y = Selector::canonical();
    sel_y.pin(cod, &v, g.clone(), tol)?;
    let sip_y = Sip::with_selector(cod, sel_y, tol);
    let mut sel_x = Selector::canonical();
    if psi_valid {
        // rounding may leave ‖ψ‖* a hair above 1; the pin itself is ψ
        sel_x.pins.push((x.clone(), psi.clone()));
    }
    let sip_x = Sip::with_selector(dom, sel_x, tol);
    let rhs_x = |z: &[f64]| -> Result<f64> {
        if psi_valid {
            sip_x.eval(z, &x)
        } else {
            Ok(psi.apply(z))
        }
    };

    let v2 = value * value;
    let mut residual_max: f64 = 0.0;
    let mut check = |z: &[f64]| -> Result<()> {
        let lhs = sip_y.eval(&op.apply(z), &tx)?;
        let rhs = v2 * rhs_x(z)?;
        residual_max = residual_max.max((lhs - rhs).abs());
        Ok(())
    };
    let n = dom.dim();
    for j in 0..n {
        check(&linalg::unit_basis(n, j))?;
    }
    check(&x)?;
    let mut rng = seeded_rng(seed);
    for _ in 0..samples {
        check(&dom.random_unit_vector_with(&mut rng))?;
    }

    let pass = psi_valid && residual_max <= tol * scale * scale;
    Ok(SipCertificate {
        mode,
        value,
        image_norm: c,
        residual_max,
        z_basis_checked: true,
        samples,
        psi_dual_norm,
        degenerate: false,
        pass,
    })
}

/// The support functional `g` minimizing `‖Tᵀg‖*` over the support set.
fn smallest_pullback(op: &Operator, support: &SupportSet) -> DualFunctional {
    let cost = |g: &[f64]| op.domain().dual_norm(&op.matrix().apply_transpose(g));
    let on_segment = |a: &DualFunctional, b: &DualFunctional| -> (f64, DualFunctional) {
        let (t, v) = golden_section(|t| cost(&linalg::lerp(a.covector(), b.covector(), t)), 0.0, 1.0, 200);
        (v, DualFunctional(linalg::lerp(a.covector(), b.covector(), t)))
    };
    match support {
        SupportSet::Unique(g) => g.clone(),
        SupportSet::Segment(a, b) => on_segment(a, b).1,
        SupportSet::Face(fs) => {
            let mut best = (cost(support.canonical().covector()), support.canonical());
            for (i, a) in fs.iter().enumerate() {
                for b in &fs[i + 1..] {
                    let cand = on_segment(a, b);
                    if cand.0 < best.0 {
                        best = cand;
                    }
                }
            }
            best.1
        }
    }
}
