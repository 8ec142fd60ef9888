//! Executable checks of the theorems about `M_T`, `m_T` and Birkhoff-James
//! orthogonality. Every check rebuilds the relevant construction on concrete
//! spaces and operators and reports pass/fail with residuals and witnesses.

mod checks;
mod corpus;
mod dichotomy;
mod suite;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

pub use checks::{
    check_cardinality_bound, check_dimension_multiplicity, check_hilbert_min_characterization, check_hyperspace_lemma,
    check_mutual_orthogonality, check_nonsmooth_counterexample, check_nonsmooth_counterexample_with, check_preservation,
    check_rank_one, check_reflexive_construct, check_sip_characterization, construct_rank_one_for_hyperspace,
    operator_with_singular_values, RankOneConstruction, APPROX_POINT_TOL,
};
pub use corpus::{corpus, CorpusEntry};
pub use dichotomy::{check_linf_asymmetry, dichotomy_outcome, euclidean_dichotomy, set_orthogonal, DichotomyOutcome};
pub use suite::{run_all, run_suite, SuiteConfig};

/// Stable identifiers of the checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum TheoremId {
    #[cfg_attr(feature = "serde", serde(rename = "lemma-hyperspace"))]
    LemmaHyperspace,
    #[cfg_attr(feature = "serde", serde(rename = "thm-sip-max"))]
    SipMax,
    #[cfg_attr(feature = "serde", serde(rename = "thm-preserve"))]
    Preserve,
    #[cfg_attr(feature = "serde", serde(rename = "thm-cardinality"))]
    Cardinality,
    #[cfg_attr(feature = "serde", serde(rename = "thm-hilbert-min"))]
    HilbertMin,
    #[cfg_attr(feature = "serde", serde(rename = "thm-dimension"))]
    Dimension,
    #[cfg_attr(feature = "serde", serde(rename = "thm-sip-min"))]
    SipMin,
    #[cfg_attr(feature = "serde", serde(rename = "thm-mutual-orth"))]
    MutualOrth,
    #[cfg_attr(feature = "serde", serde(rename = "thm-rank-one"))]
    RankOne,
    #[cfg_attr(feature = "serde", serde(rename = "thm-reflexive-construct"))]
    ReflexiveConstruct,
    #[cfg_attr(feature = "serde", serde(rename = "thm-euclidean-2d"))]
    Euclidean2d,
    #[cfg_attr(feature = "serde", serde(rename = "thm-euclidean-nd"))]
    EuclideanNd,
    #[cfg_attr(feature = "serde", serde(rename = "remark-nonsmooth"))]
    RemarkNonsmooth,
    #[cfg_attr(feature = "serde", serde(rename = "remark-linf-asym"))]
    RemarkLinfAsym,
}

impl TheoremId {
    pub const ALL: [TheoremId; 14] = [
        TheoremId::LemmaHyperspace,
        TheoremId::SipMax,
        TheoremId::Preserve,
        TheoremId::Cardinality,
        TheoremId::HilbertMin,
        TheoremId::Dimension,
        TheoremId::SipMin,
        TheoremId::MutualOrth,
        TheoremId::RankOne,
        TheoremId::ReflexiveConstruct,
        TheoremId::Euclidean2d,
        TheoremId::EuclideanNd,
        TheoremId::RemarkNonsmooth,
        TheoremId::RemarkLinfAsym,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::LemmaHyperspace => "lemma-hyperspace",
            TheoremId::SipMax => "thm-sip-max",
            TheoremId::Preserve => "thm-preserve",
            TheoremId::Cardinality => "thm-cardinality",
            TheoremId::HilbertMin => "thm-hilbert-min",
            TheoremId::Dimension => "thm-dimension",
            TheoremId::SipMin => "thm-sip-min",
            TheoremId::MutualOrth => "thm-mutual-orth",
            TheoremId::RankOne => "thm-rank-one",
            TheoremId::ReflexiveConstruct => "thm-reflexive-construct",
            TheoremId::Euclidean2d => "thm-euclidean-2d",
            TheoremId::EuclideanNd => "thm-euclidean-nd",
            TheoremId::RemarkNonsmooth => "remark-nonsmooth",
            TheoremId::RemarkLinfAsym => "remark-linf-asym",
        }
    }

    pub fn parse(s: &str) -> Result<TheoremId> {
        TheoremId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(alloc::format!("unknown theorem id {s:?}")))
    }

    /// All ids in the order reports are merged, i.e. sorted by their string.
    pub fn sorted() -> Vec<TheoremId> {
        let mut ids = TheoremId::ALL.to_vec();
        ids.sort_by_key(|id| id.as_str());
        ids
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A labelled vector attached to a report.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Witness {
    pub label: String,
    pub coords: Vec<f64>,
}

impl Witness {
    pub fn new(label: impl Into<String>, coords: &[f64]) -> Self {
        Witness { label: label.into(), coords: coords.to_vec() }
    }

    /// Matrix entries in row-major order.
    pub fn matrix(label: impl Into<String>, m: &Matrix) -> Self {
        Witness { label: label.into(), coords: m.to_rows().concat() }
    }
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TheoremReport {
    pub theorem_id: TheoremId,
    pub pass: bool,
    /// False when the hypotheses of the theorem do not hold for the input;
    /// `pass` then describes what was observed and asserts nothing.
    pub applicable: bool,
    pub witnesses: Vec<Witness>,
    pub max_residual: f64,
    pub notes: String,
}

impl TheoremReport {
    pub fn new(theorem_id: TheoremId) -> Self {
        TheoremReport { theorem_id, pass: true, applicable: true, witnesses: Vec::new(), max_residual: 0.0, notes: String::new() }
    }

    pub fn not_applicable(theorem_id: TheoremId, why: &str) -> Self {
        let mut r = TheoremReport::new(theorem_id);
        r.applicable = false;
        r.note(why);
        r
    }

    pub fn note(&mut self, line: &str) {
        if !self.notes.is_empty() {
            self.notes.push_str("; ");
        }
        self.notes.push_str(line);
    }

    pub fn residual(&mut self, r: f64) {
        if r > self.max_residual || r.is_nan() {
            self.max_residual = r;
        }
    }

    /// Counts as a failure only when applicable.
    pub fn failed(&self) -> bool {
        self.applicable && !self.pass
    }

    /// Folds sub-reports into one: passes when every applicable part passes.
    /// Witnesses are kept from failing parts only, at most `max_witnesses`.
    pub fn merge(theorem_id: TheoremId, parts: &[TheoremReport], max_witnesses: usize) -> TheoremReport {
        let mut out = TheoremReport::new(theorem_id);
        let applicable: Vec<&TheoremReport> = parts.iter().filter(|p| p.applicable).collect();
        let passed = applicable.iter().filter(|p| p.pass).count();
        out.applicable = !applicable.is_empty();
        out.pass = passed == applicable.len();
        for p in &applicable {
            out.residual(p.max_residual);
        }
        out.note(&alloc::format!("{passed}/{} pass", applicable.len()));
        if parts.len() > applicable.len() {
            out.note(&alloc::format!("{} not applicable", parts.len() - applicable.len()));
        }
        for p in parts.iter().filter(|p| p.failed()) {
            out.note(&p.notes);
            for w in &p.witnesses {
                if out.witnesses.len() < max_witnesses {
                    out.witnesses.push(w.clone());
                }
            }
        }
        out
    }
}
