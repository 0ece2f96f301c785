use std::process::Command;

use spherebraid::cli_verifier::{render_suite, run_suite, CheckResult, CheckStatus, Format, NRange, SuiteResult};

fn bin(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_spherebraid")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn synthetic() -> SuiteResult {
    let check = |anchor: &str, status| CheckResult { anchor: anchor.into(), status, elapsed_us: None, detail: None };
    SuiteResult {
        suite: "torsion".into(),
        n_range: NRange::new(4, 5),
        checks: vec![
            check("a", CheckStatus::Pass),
            check("b", CheckStatus::Fail),
            check("c", CheckStatus::Pass),
            check("d, with a comma", CheckStatus::Fail),
        ],
        passed: false,
    }
}

#[test]
fn json_round_trips() {
    let r = run_suite("propsomega", Some(NRange::new(4, 8))).unwrap().without_timings();
    let text = render_suite(&r, Format::Json).unwrap();
    let back: SuiteResult = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
    let s = synthetic();
    assert_eq!(serde_json::from_str::<SuiteResult>(&render_suite(&s, Format::Json).unwrap()).unwrap(), s);
}

#[test]
fn csv_has_a_row_per_check() {
    let s = synthetic();
    let text = render_suite(&s, Format::Csv).unwrap();
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rd.records().count(), s.checks.len());
    assert_eq!(text.lines().count(), s.checks.len() + 1);
}

#[test]
fn text_lists_each_failure() {
    let text = render_suite(&synthetic(), Format::Text).unwrap();
    let fails: Vec<&str> = text.lines().filter(|l| l.starts_with("FAIL ") && !l.starts_with("FAIL torsion n=")).collect();
    assert_eq!(fails.len(), 2);
    let ok = run_suite("torsion", Some(NRange::new(4, 5))).unwrap();
    assert_eq!(render_suite(&ok, Format::Text).unwrap().lines().count(), 1);
}

#[test]
fn verify_is_deterministic_and_exits_cleanly() {
    let (code, first) = bin(&["verify", "--suite", "funda", "--n", "4..6"]);
    assert_eq!(code, 0);
    let (_, second) = bin(&["verify", "--suite", "funda", "--n", "4..6"]);
    assert_eq!(first, second);
    let (code, _) = bin(&["verify", "--suite", "nonsense"]);
    assert_ne!(code, 0);
    let (code, _) = bin(&["verify", "--suite", "torsion", "--n", "1..5"]);
    assert_ne!(code, 0);
    let (code, _) = bin(&["verify", "--suite", "torsion", "--format", "yaml"]);
    assert_ne!(code, 0);
}

#[test]
fn braid_commands() {
    let (code, out) = bin(&["order", "--n", "5", "--word", "a0"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["order"], "10");
    let (_, out) = bin(&["equal", "--n", "4", "D^2", "a0^4"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["equal"], true);
}

#[test]
fn classify_and_witness() {
    let (code, out) = bin(&["classify", "--n", "5", "--status", "realized", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.lines().skip(1).all(|l| l.contains(",realized,")));
    let (code, out) = bin(&["witness", "--n", "8", "--class", "Z8 *_Z4 Z8"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v[0]["witness"].as_array().is_some_and(|w| !w.is_empty()));
    let (code, _) = bin(&["witness", "--n", "6", "--class", "T* x_omega Z"]);
    assert_ne!(code, 0);
}

#[test]
fn group_and_amalgam_commands() {
    let (_, out) = bin(&["group", "aut", "Q8"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["out"], 6);
    let (code, _) = bin(&["amalgam", "semidirect", "K1"]);
    assert_eq!(code, 0);
    let (code, _) = bin(&["amalgam", "semidirect", "K2"]);
    assert_eq!(code, 1);
    let (code, _) = bin(&["amalgam", "k1k2", "--dihedral"]);
    assert_eq!(code, 0);
}

#[test]
fn coset_budget_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_spherebraid"))
        .args(["verify", "--suite", "presentation", "--n", "4"])
        .env("SPHEREBRAID_COSET_BUDGET", "30")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
