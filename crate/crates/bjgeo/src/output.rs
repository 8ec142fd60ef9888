//! Serialized results of each subcommand. Every struct re-parses from the JSON
//! it prints.

use bjgeo_core::attain::ProfileSample;
use bjgeo_core::{AttainmentSet, Mode, OrthogonalityCertificate, SipCertificate, TheoremReport};
use serde::{Deserialize, Serialize};

use crate::io::{OperatorSpec, SpaceSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttainResult {
    pub set: AttainmentSet,
    /// Representatives with their antipodes.
    pub members: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttainOutput {
    pub operator: OperatorSpec,
    pub tol: f64,
    pub seed: u64,
    pub restarts: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<AttainResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<AttainResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BjCheckOutput {
    pub space: SpaceSpec,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub tol: f64,
    /// `x ⊥_B y`
    pub certificate: OrthogonalityCertificate,
    /// `y/‖y‖ ⊥_B x`, absent for `y = 0`.
    pub reverse: Option<OrthogonalityCertificate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SipOutput {
    pub operator: OperatorSpec,
    pub x: Vec<f64>,
    pub mode: Mode,
    pub tol: f64,
    pub seed: u64,
    pub samples: usize,
    pub certificate: Option<SipCertificate>,
    /// Why `x` was rejected before a certificate could be built.
    pub rejection: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOutput {
    pub tol: f64,
    pub seed: u64,
    pub trials: usize,
    pub samples: usize,
    pub restarts: usize,
    pub space: Option<SpaceSpec>,
    pub reports: Vec<TheoremReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileOutput {
    pub operator: OperatorSpec,
    pub samples: Vec<ProfileSample>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOutput {
    pub space: SpaceSpec,
    pub tol: f64,
    pub seed: u64,
    pub trials: usize,
    pub report: TheoremReport,
}

/// Any subcommand result.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Attain(AttainOutput),
    BjCheck(BjCheckOutput),
    Sip(SipOutput),
    Verify(VerifyOutput),
    Profile(ProfileOutput),
    Search(SearchOutput),
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|c| format!("{c}")).collect();
    format!("({})", parts.join(", "))
}

fn csv_string(rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.write_record(&row).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8")
}

fn report_rows(reports: &[TheoremReport]) -> Vec<Vec<String>> {
    let mut rows = vec![["theorem_id", "pass", "applicable", "max_residual", "notes"].map(String::from).to_vec()];
    for r in reports {
        rows.push(vec![
            r.theorem_id.to_string(),
            r.pass.to_string(),
            r.applicable.to_string(),
            r.max_residual.to_string(),
            r.notes.clone(),
        ]);
    }
    rows
}

fn report_line(r: &TheoremReport) -> String {
    let verdict = match (r.applicable, r.pass) {
        (false, _) => "N/A ",
        (true, true) => "PASS",
        (true, false) => "FAIL",
    };
    format!("{verdict} {} (max residual {:e}): {}", r.theorem_id, r.max_residual, r.notes)
}

impl Output {
    pub fn json(&self) -> String {
        let s = match self {
            Output::Attain(o) => serde_json::to_string_pretty(o),
            Output::BjCheck(o) => serde_json::to_string_pretty(o),
            Output::Sip(o) => serde_json::to_string_pretty(o),
            Output::Verify(o) => serde_json::to_string_pretty(o),
            Output::Profile(o) => serde_json::to_string_pretty(o),
            Output::Search(o) => serde_json::to_string_pretty(o),
        };
        s.expect("outputs serialize") + "\n"
    }

    pub fn csv(&self) -> String {
        let rows = match self {
            Output::Attain(o) => {
                let dim = o.operator.matrix.first().map_or(0, Vec::len);
                let mut header: Vec<String> = ["mode", "value", "approximate", "method"].map(String::from).to_vec();
                header.extend((1..=dim).map(|i| format!("x{i}")));
                let mut rows = vec![header];
                for r in [&o.max, &o.min].into_iter().flatten() {
                    for m in &r.members {
                        let mut row = vec![
                            r.set.mode.as_str().to_string(),
                            r.set.value.to_string(),
                            r.set.approximate.to_string(),
                            r.set.method.clone(),
                        ];
                        row.extend(m.iter().map(f64::to_string));
                        rows.push(row);
                    }
                }
                rows
            }
            Output::BjCheck(o) => {
                let c = &o.certificate;
                vec![
                    ["orthogonal", "rho_minus", "rho_plus", "lambda_star", "min_value"].map(String::from).to_vec(),
                    vec![
                        c.orthogonal.to_string(),
                        c.rho_minus.to_string(),
                        c.rho_plus.to_string(),
                        c.lambda_star.to_string(),
                        c.min_value.to_string(),
                    ],
                ]
            }
            Output::Sip(o) => {
                let mut rows = vec![["mode", "value", "image_norm", "residual_max", "psi_dual_norm", "pass"]
                    .map(String::from)
                    .to_vec()];
                if let Some(c) = &o.certificate {
                    rows.push(vec![
                        c.mode.as_str().into(),
                        c.value.to_string(),
                        c.image_norm.to_string(),
                        c.residual_max.to_string(),
                        c.psi_dual_norm.to_string(),
                        c.pass.to_string(),
                    ]);
                }
                rows
            }
            Output::Verify(o) => report_rows(&o.reports),
            Output::Search(o) => report_rows(core::slice::from_ref(&o.report)),
            Output::Profile(o) => {
                let dim = o.samples.first().map_or(2, |s| s.x.len());
                let mut header = vec!["angle".to_string()];
                header.extend((1..=dim).map(|i| format!("x{i}")));
                header.push("norm_Tx".into());
                let mut rows = vec![header];
                for s in &o.samples {
                    let mut row = vec![s.angle.to_string()];
                    row.extend(s.x.iter().map(f64::to_string));
                    row.push(s.norm_tx.to_string());
                    rows.push(row);
                }
                rows
            }
        };
        csv_string(rows)
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        match self {
            Output::Attain(o) => {
                for r in [&o.max, &o.min].into_iter().flatten() {
                    let name = match r.set.mode {
                        Mode::Max => "‖T‖ ",
                        Mode::Min => "m(T)",
                    };
                    let exact = if r.set.approximate { "approximate" } else { "exact" };
                    out += &format!("{name} = {} ({exact}, {})\n", r.set.value, r.set.method);
                    for m in &r.members {
                        out += &format!("  {}\n", fmt_vec(m));
                    }
                }
            }
            Output::BjCheck(o) => {
                let c = &o.certificate;
                out += if c.orthogonal { "ORTHOGONAL\n" } else { "NOT ORTHOGONAL\n" };
                out += &format!(
                    "rho_- = {}, rho_+ = {}, lambda* = {}, min |x + λy| = {}\n",
                    c.rho_minus, c.rho_plus, c.lambda_star, c.min_value
                );
                if let Some(r) = &o.reverse {
                    let verdict = if r.orthogonal { "orthogonal" } else { "not orthogonal" };
                    out += &format!("reverse (y ⊥_B x): {verdict}\n");
                }
            }
            Output::Sip(o) => match (&o.certificate, &o.rejection) {
                (Some(c), _) => {
                    out += if c.pass { "CERTIFIED\n" } else { "NOT CERTIFIED\n" };
                    out += &format!(
                        "mode {}, value {}, |Tx| = {}, residual {:e}, psi dual norm {}\n",
                        c.mode.as_str(),
                        c.value,
                        c.image_norm,
                        c.residual_max,
                        c.psi_dual_norm
                    );
                }
                (None, Some(why)) => out += &format!("NOT CERTIFIED\n{why}\n"),
                (None, None) => out += "NOT CERTIFIED\n",
            },
            Output::Verify(o) => {
                for r in &o.reports {
                    out += &report_line(r);
                    out.push('\n');
                }
            }
            Output::Search(o) => {
                out += &report_line(&o.report);
                out.push('\n');
            }
            Output::Profile(_) => out = self.csv(),
        }
        out
    }
}
