use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::checks::*;
use super::dichotomy::{check_linf_asymmetry, euclidean_dichotomy};
use super::{corpus, TheoremId, TheoremReport};
use crate::attain::{attain, AttainOptions, Mode, Operator};
use crate::error::{Error, Result};
use crate::norm::{Exponent, NormSpace};
use crate::ortho::Hyperspace;
use crate::random::{gaussian_matrix, gaussian_vector, random_gram, substream, uniform};

/// Witnesses kept in a merged report.
const MAX_WITNESSES: usize = 8;
/// Members of one attainment set fed to per-point checks.
const MAX_MEMBERS: usize = 6;

/// Parameters shared by every suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub tol: f64,
    pub seed: u64,
    /// Random operators (or hyperspaces) per suite.
    pub trials: usize,
    /// Random directions per certificate or preservation check.
    pub samples: usize,
    pub restarts: usize,
    /// Run on this space instead of the built-in choice.
    pub space: Option<NormSpace>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { tol: crate::DEFAULT_TOL, seed: 42, trials: 20, samples: 200, restarts: 32, space: None }
    }
}

impl SuiteConfig {
    fn options(&self, seed: u64) -> AttainOptions {
        AttainOptions { tol: self.tol, restarts: self.restarts, seed }
    }
}

/// The corpus, or random operators on the configured space.
fn operators(cfg: &SuiteConfig) -> Vec<Operator> {
    match &cfg.space {
        Some(space) => (0..cfg.trials)
            .map(|i| {
                let m = gaussian_matrix(&mut substream(cfg.seed, i as u64), space.dim(), space.dim());
                Operator::endo(m, space.clone()).expect("square matrix")
            })
            .collect(),
        None => corpus().into_iter().map(|e| e.operator).collect(),
    }
}

fn members(op: &Operator, mode: Mode, cfg: &SuiteConfig) -> Result<Vec<Vec<f64>>> {
    let mut reps = attain(op, mode, &cfg.options(cfg.seed))?.representatives(op.domain());
    reps.truncate(MAX_MEMBERS);
    Ok(reps)
}

/// Random operator between random Gram spaces of dimension `2 + i % 4`, with
/// a repeated least singular value for odd `i`.
fn random_inner_operator(cfg: &SuiteConfig, i: usize) -> Result<Operator> {
    let mut rng = substream(cfg.seed, i as u64);
    let (dom, cod) = match &cfg.space {
        Some(s) if s.is_inner_product() => (s.clone(), s.clone()),
        Some(_) => return Err(Error::Unsupported("this suite needs an inner-product space".into())),
        None => {
            let n = 2 + i % 4;
            (
                NormSpace::inner_product(random_gram(&mut rng, n))?,
                NormSpace::inner_product(random_gram(&mut rng, n))?,
            )
        }
    };
    let n = dom.dim();
    let repeat = if i % 2 == 1 { 1 + (i / 2) % (n - 1).max(1) } else { 1 };
    let mut s: Vec<f64> = (0..n).map(|_| uniform(&mut rng, 1.5, 3.0)).collect();
    for v in s.iter_mut().skip(n - repeat) {
        *v = 1.0;
    }
    let a = operator_with_singular_values(&dom, &cod, &s, &mut rng)?;
    Operator::new(a, dom, cod)
}

fn spaces_or(cfg: &SuiteConfig, default: Vec<NormSpace>) -> Vec<NormSpace> {
    match &cfg.space {
        Some(s) => vec![s.clone()],
        None => default,
    }
}

/// Runs every check behind `id` and merges the results into one report.
pub fn run_suite(id: TheoremId, cfg: &SuiteConfig) -> Result<TheoremReport> {
    let tol = cfg.tol;
    let mut parts = Vec::new();
    match id {
        TheoremId::LemmaHyperspace => {
            for (k, op) in operators(cfg).iter().enumerate() {
                if op.is_zero() {
                    continue;
                }
                for x in members(op, Mode::Max, cfg)? {
                    parts.push(check_hyperspace_lemma(op, &x, cfg.seed + k as u64, tol)?);
                }
            }
        }
        TheoremId::SipMax | TheoremId::SipMin => {
            let mode = if id == TheoremId::SipMax { Mode::Max } else { Mode::Min };
            for (k, op) in operators(cfg).iter().enumerate() {
                parts.push(check_sip_characterization(op, mode, cfg.samples, 50, cfg.seed + k as u64, tol)?);
            }
        }
        TheoremId::Preserve => {
            for (k, op) in operators(cfg).iter().enumerate() {
                if op.is_zero() {
                    continue;
                }
                for x in members(op, Mode::Min, cfg)? {
                    parts.push(check_preservation(op, &x, cfg.samples, cfg.seed + k as u64, tol)?);
                }
            }
        }
        TheoremId::Cardinality => {
            let spaces = spaces_or(cfg, vec![NormSpace::lp(2, 3.0)?, NormSpace::lp(2, 4.0)?]);
            for space in spaces {
                if !matches!(space, NormSpace::Lp { dim: 2, p: Exponent::Finite(_) }) {
                    return Err(Error::Unsupported("the cardinality suite runs on lp^2".into()));
                }
                for i in 0..cfg.trials {
                    let m = gaussian_matrix(&mut substream(cfg.seed, i as u64), 2, 2);
                    let op = Operator::endo(m, space.clone())?;
                    parts.push(check_cardinality_bound(&op, cfg.restarts, cfg.seed + i as u64, tol)?);
                }
            }
        }
        TheoremId::HilbertMin | TheoremId::Dimension | TheoremId::MutualOrth => {
            for i in 0..cfg.trials {
                let op = random_inner_operator(cfg, i)?;
                parts.push(match id {
                    TheoremId::HilbertMin => check_hilbert_min_characterization(&op, cfg.seed + i as u64, tol)?,
                    TheoremId::Dimension => check_dimension_multiplicity(&op, tol)?,
                    _ => check_mutual_orthogonality(&op, tol)?,
                });
            }
        }
        TheoremId::RankOne => {
            let spaces = spaces_or(cfg, vec![NormSpace::euclidean(2), NormSpace::euclidean(3), NormSpace::lp(2, 3.0)?]);
            for space in spaces {
                for i in 0..cfg.trials {
                    let mut rng = substream(cfg.seed, i as u64);
                    let f = gaussian_vector(&mut rng, space.dim());
                    let y = gaussian_vector(&mut rng, space.dim());
                    parts.push(check_rank_one(&space, &f, &y, cfg.seed + i as u64, tol)?);
                }
            }
        }
        TheoremId::ReflexiveConstruct => {
            let spaces = spaces_or(
                cfg,
                vec![NormSpace::euclidean(2), NormSpace::euclidean(3), NormSpace::lp(2, 3.0)?, NormSpace::regular_hexagon()],
            );
            for space in spaces {
                for i in 0..cfg.trials {
                    let normal = gaussian_vector(&mut substream(cfg.seed, i as u64), space.dim());
                    let h = Hyperspace::from_normal(&normal)?;
                    parts.push(check_reflexive_construct(&space, &h, cfg.seed + i as u64, tol)?);
                }
            }
        }
        TheoremId::Euclidean2d | TheoremId::EuclideanNd => {
            let two = id == TheoremId::Euclidean2d;
            let spaces = match &cfg.space {
                Some(s) if (s.dim() == 2) == two => vec![s.clone()],
                Some(s) => {
                    return Err(Error::InvalidArgument(format!(
                        "{id} does not apply to a space of dimension {}",
                        s.dim()
                    )))
                }
                None if two => vec![NormSpace::euclidean(2), NormSpace::regular_hexagon()],
                None => vec![NormSpace::euclidean(3)],
            };
            for space in spaces {
                let mut r = euclidean_dichotomy(&space, cfg.trials, cfg.seed, tol)?;
                r.theorem_id = id;
                parts.push(r);
            }
        }
        TheoremId::RemarkNonsmooth => parts.push(check_nonsmooth_counterexample(tol)?),
        TheoremId::RemarkLinfAsym => parts.push(check_linf_asymmetry(tol)?),
    }
    if parts.len() == 1 {
        return Ok(parts.pop().expect("one part"));
    }
    Ok(TheoremReport::merge(id, &parts, MAX_WITNESSES))
}

/// Every suite, in theorem-id order. Suites that cannot run on the
/// configured space come back as not applicable.
pub fn run_all(cfg: &SuiteConfig) -> Result<Vec<TheoremReport>> {
    TheoremId::sorted()
        .into_iter()
        .map(|id| match run_suite(id, cfg) {
            Err(e @ (Error::Unsupported(_) | Error::InvalidArgument(_))) => {
                Ok(TheoremReport::not_applicable(id, &format!("{e}")))
            }
            other => other,
        })
        .collect()
}
