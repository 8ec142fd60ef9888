use std::path::PathBuf;
use std::process::{Command, Output};

use bjgeo::output::{AttainOutput, BjCheckOutput, ProfileOutput, SearchOutput, SipOutput, VerifyOutput};
use bjgeo::{run, Cli};
use clap::Parser;
use serde::de::DeserializeOwned;
use serde::Serialize;
use tempfile::TempDir;

const HEXAGON: &str = r#"{"kind":"polygon","vertices":[[1,0],[0.5,0.8660254037844386],[-0.5,0.8660254037844386]]}"#;

struct Files {
    dir: TempDir,
}

impl Files {
    fn new() -> Self {
        let f = Files { dir: tempfile::tempdir().unwrap() };
        f.write("sup.json", r#"{"kind":"lp","p":"inf","dim":2}"#);
        f.write("hexagon.json", HEXAGON);
        f.write("e3.json", r#"{"kind":"inner_product","gram":[[1,0,0],[0,1,0],[0,0,1]]}"#);
        f.write(
            "hex_b.json",
            &format!(r#"{{"matrix":[[0.75,-0.4330127018922193],[0.4330127018922193,0.75]],"domain":{HEXAGON}}}"#),
        );
        f.write(
            "l3.json",
            r#"{"matrix":[[1,0.5],[-0.3,1]],"domain":{"kind":"lp","p":3,"dim":2},"codomain":{"kind":"lp","p":"inf","dim":2}}"#,
        );
        f.write(
            "e3_op.json",
            r#"{"matrix":[[3,0,0],[0,1,0],[0,0,2]],"domain":{"kind":"inner_product","gram":[[1,0,0],[0,1,0],[0,0,1]]}}"#,
        );
        f
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn path(&self, name: &str) -> String {
        self.dir.path().join(name).display().to_string()
    }
}

fn bjgeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bjgeo")).args(args).env_remove("BJGEO_TOL").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Runs the binary with JSON output, re-parses it, and checks that the
/// structure matches an in-process run and serializes back to the same bytes.
fn round_trip<T>(args: &[&str], expected_status: i32) -> T
where
    T: DeserializeOwned + Serialize + PartialEq + std::fmt::Debug,
{
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--format", "json"]);
    let out = bjgeo(&full);
    assert_eq!(out.status.code(), Some(expected_status), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let parsed: T = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&parsed).unwrap() + "\n", text);

    let cli = Cli::try_parse_from(std::iter::once("bjgeo").chain(full.iter().copied())).unwrap();
    let outcome = run(&cli).unwrap();
    assert_eq!(i32::from(outcome.status), expected_status);
    assert_eq!(outcome.output.json(), text);
    parsed
}

fn near(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

#[test]
fn bj_check_reproduces_the_sup_norm_remark() {
    let f = Files::new();
    let sup = f.path("sup.json");
    let out = bjgeo(&["bj-check", "--space", &sup, "1,1", "0,1", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().next(), Some("ORTHOGONAL"));

    let out = bjgeo(&["bj-check", "--space", &sup, "0,1", "1,1", "--format", "text"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out).lines().next(), Some("NOT ORTHOGONAL"));

    let r: BjCheckOutput = round_trip(&["bj-check", "--space", &sup, "1,1", "0,1"], 0);
    assert!(r.certificate.orthogonal);
    assert!(!r.reverse.unwrap().orthogonal);
}

#[test]
fn attain_reports_the_hexagon_minimum() {
    let f = Files::new();
    let r: AttainOutput = round_trip(&["attain", "--operator", &f.path("hex_b.json")], 0);
    let min = r.min.unwrap();
    assert!((min.set.value - 0.75).abs() <= 1e-9);
    assert_eq!(min.members.len(), 6);
    let h = 3f64.sqrt() / 4.0;
    for p in [[0.75, h], [0.0, 2.0 * h], [-0.75, h]] {
        for s in [1.0, -1.0] {
            let q = [s * p[0], s * p[1]];
            assert!(min.members.iter().any(|m| near(m, &q, 1e-9)), "{q:?} missing from {:?}", min.members);
        }
    }
    let max = r.max.unwrap();
    assert!((max.set.value - 1.0).abs() <= 1e-9);
    assert_eq!(max.members.len(), 6);
}

#[test]
fn attain_mode_flag_limits_the_output() {
    let f = Files::new();
    let r: AttainOutput = round_trip(&["attain", "--operator", &f.path("l3.json"), "--mode", "max"], 0);
    assert!(r.min.is_none() && r.max.unwrap().set.approximate);
}

#[test]
fn sip_certify_accepts_members_and_rejects_others() {
    let f = Files::new();
    let op = f.path("hex_b.json");
    let r: SipOutput = round_trip(&["sip-certify", "--operator", &op, "0,0.8660254037844386", "--mode", "min"], 0);
    assert!(r.certificate.unwrap().pass);
    let r: SipOutput = round_trip(&["sip-certify", "--operator", &op, "1,0", "--mode", "min"], 1);
    assert!(!r.certificate.unwrap().pass);
    let r: SipOutput = round_trip(&["sip-certify", "--operator", &op, "-1,0", "--mode", "max"], 0);
    assert!(r.certificate.unwrap().pass);
}

#[test]
fn verify_mutual_orthogonality_on_euclidean_space() {
    let f = Files::new();
    let args =
        ["verify", "--theorem", "thm-mutual-orth", "--trials", "100", "--seed", "7", "--space", &f.path("e3.json")];
    let r: VerifyOutput = round_trip(&args, 0);
    assert_eq!(r.reports.len(), 1);
    assert!(r.reports[0].pass && r.reports[0].applicable);
    assert!(r.reports[0].notes.starts_with("100/100 pass"), "{}", r.reports[0].notes);
}

#[test]
fn verify_all_is_sorted_deterministic_and_passes() {
    let a = bjgeo(&["verify", "--trials", "4", "--samples", "50"]);
    let b = bjgeo(&["verify", "--trials", "4", "--samples", "50"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    let r: VerifyOutput = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(r.reports.len(), 14);
    let ids: Vec<String> = r.reports.iter().map(|r| r.theorem_id.to_string()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn verify_all_on_a_given_space_marks_inapplicable_suites() {
    let f = Files::new();
    let r: VerifyOutput =
        round_trip(&["verify", "--trials", "3", "--samples", "50", "--space", &f.path("sup.json")], 0);
    let card = r.reports.iter().find(|r| r.theorem_id.as_str() == "thm-cardinality").unwrap();
    assert!(!card.applicable);
}

#[test]
fn unknown_theorem_is_an_input_error() {
    let out = bjgeo(&["verify", "--theorem", "thm-nonexistent"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn search_finds_violations_on_the_hexagon() {
    let f = Files::new();
    let r: SearchOutput = round_trip(&["search", "--space", &f.path("hexagon.json"), "--trials", "5"], 0);
    assert!(r.report.pass);
    assert!(r.report.notes.contains("trial 0: M_T not ⊥_B m_T"), "{}", r.report.notes);
}

#[test]
fn profile_exports_csv_and_json() {
    let f = Files::new();
    let out = bjgeo(&["profile", "--operator", &f.path("hex_b.json"), "--samples", "120"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("angle,x1,x2,norm_Tx"));
    assert_eq!(lines.count(), 120);

    let out = bjgeo(&["profile", "--operator", &f.path("e3_op.json"), "--samples", "200"]);
    assert_eq!(stdout(&out).lines().next(), Some("angle,x1,x2,x3,norm_Tx"));

    let r: ProfileOutput = round_trip(&["profile", "--operator", &f.path("hex_b.json"), "--samples", "100"], 0);
    let min = r.samples.iter().map(|s| s.norm_tx).fold(f64::INFINITY, f64::min);
    assert!((min - 0.75).abs() < 1e-3);
}

#[test]
fn output_flag_writes_the_file() {
    let f = Files::new();
    let target = f.dir.path().join("out.json");
    let out = bjgeo(&["attain", "--operator", &f.path("hex_b.json"), "--output", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: AttainOutput = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert!(r.max.is_some());
}

#[test]
fn malformed_json_exits_two_with_a_location() {
    let f = Files::new();
    let bad = f.write(
        "bad.json",
        "{\"matrix\": [[1, 0], [0, 1]],\n \"domain\": {\"kind\": \"lp\", \"p\": 2, \"dim\": \"two\"}}",
    );
    let out = bjgeo(&["attain", "--operator", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bad.json:2:"), "{err}");
    assert!(err.contains("domain"), "{err}");

    let truncated = f.write("cut.json", "{\"kind\": \"lp\",");
    let out = bjgeo(&["bj-check", "--space", truncated.to_str().unwrap(), "1,0", "0,1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_inputs_exit_two() {
    let f = Files::new();
    let sup = f.path("sup.json");
    let cases: Vec<Vec<&str>> = vec![
        vec!["bj-check", "--space", &sup, "1,1,0", "0,1"],
        vec!["bj-check", "--space", &sup, "2,0", "0,1"],
        vec!["bj-check", "--space", &sup, "1,x", "0,1"],
        vec!["bj-check", "--space", "/nonexistent/space.json", "1,0", "0,1"],
        vec!["verify", "--tol", "-1"],
        vec!["profile", "--operator", "/nonexistent.json"],
    ];
    for args in cases {
        assert_eq!(bjgeo(&args).status.code(), Some(2), "{args:?}");
    }
    let bad_gram = f.write("gram.json", r#"{"kind":"inner_product","gram":[[1,2],[2,1]]}"#);
    assert_eq!(bjgeo(&["search", "--space", bad_gram.to_str().unwrap()]).status.code(), Some(2));
    let mismatch = f.write("mismatch.json", r#"{"matrix":[[1,0,0],[0,1,0]],"domain":{"kind":"lp","p":2,"dim":2}}"#);
    assert_eq!(bjgeo(&["attain", "--operator", mismatch.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn tolerance_comes_from_the_environment() {
    let f = Files::new();
    let out = Command::new(env!("CARGO_BIN_EXE_bjgeo"))
        .args(["bj-check", "--space", &f.path("sup.json"), "1,1", "0,1"])
        .env("BJGEO_TOL", "1e-6")
        .output()
        .unwrap();
    let r: BjCheckOutput = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(r.tol, 1e-6);
    let out = Command::new(env!("CARGO_BIN_EXE_bjgeo"))
        .args(["bj-check", "--space", &f.path("sup.json"), "1,1", "0,1"])
        .env("BJGEO_TOL", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn csv_and_text_formats_render_every_command() {
    let f = Files::new();
    let op = f.path("hex_b.json");
    let out = bjgeo(&["attain", "--operator", &op, "--format", "csv"]);
    assert!(stdout(&out).starts_with("mode,value,approximate,method,x1,x2\n"));
    let out = bjgeo(&["verify", "--theorem", "remark-linf-asym", "--format", "csv"]);
    assert!(stdout(&out).starts_with("theorem_id,pass,applicable,max_residual,notes\nremark-linf-asym,true,true"));
    let out = bjgeo(&["verify", "--theorem", "remark-linf-asym", "--format", "text"]);
    assert!(stdout(&out).starts_with("PASS remark-linf-asym"));
    let out = bjgeo(&["attain", "--operator", &op, "--format", "text"]);
    assert!(stdout(&out).contains("m(T) = 0.75"));
}
