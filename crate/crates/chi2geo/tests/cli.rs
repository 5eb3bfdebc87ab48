//! End-to-end tests of the `chi2geo` binary: exit codes, JSON report shape,
//! stdin piping, and the generator-id environment override.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_chi2geo"));
    c.env_remove("CHI2GEO_GENERATOR");
    c
}

fn write_spec(dir: &tempfile::TempDir, name: &str, contents: &str) -> std::path::PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn json_stdout(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is valid JSON")
}

const RANK_ONE: &str = r#"{"mu": [1.0, 1.0], "cov": [[0.5, 0.5], [0.5, 0.5]]}"#;
const STANDARD_2D: &str = r#"{"mu": [0.0, 0.0], "cov": [[1.0, 0.0], [0.0, 1.0]]}"#;
const DIAG_HALF: &str = r#"{"mu": [0.0, 0.0], "cov": [[1.0, 0.0], [0.0, 0.5]]}"#;

#[test]
fn characterize_rank_one_projection() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_spec(&dir, "spec.json", RANK_ONE);
    let out = bin().args(["characterize"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    assert_eq!(v["verdict"]["is_chi_square"], Value::Bool(true));
    assert_eq!(v["verdict"]["df"], Value::from(1));
    let ncp = v["verdict"]["ncp"].as_f64().unwrap();
    assert!((ncp - 1.4142135623730951).abs() < 1e-10);
    let lambda = v["ncp_lambda"].as_f64().unwrap();
    assert!((lambda - 2.0).abs() < 1e-10);
}

#[test]
fn characterize_negative_has_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_spec(&dir, "spec.json", DIAG_HALF);
    let out = bin().args(["characterize"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    assert_eq!(v["verdict"]["is_chi_square"], Value::Bool(false));
    let offending = v["verdict"]["diagnostics"]["offending_eigenvalues"]
        .as_array()
        .unwrap();
    assert_eq!(offending.len(), 1);
    assert!((offending[0].as_f64().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn cumulants_of_standard_normal_pair() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_spec(&dir, "spec.json", STANDARD_2D);
    let out = bin()
        .args(["cumulants", "--order", "3"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    let norm: Vec<f64> = v["norm_cumulants"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert_eq!(norm, vec![2.0, 4.0, 16.0]);
    let chisq: Vec<f64> = v["chisq_cumulants"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert_eq!(chisq, vec![2.0, 4.0, 16.0]);
    assert_eq!(v["max_relative_gap"].as_f64().unwrap(), 0.0);
}

#[test]
fn cumulants_sides_and_order_limit() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_spec(&dir, "spec.json", DIAG_HALF);
    // "no" verdict: only the norm side is emitted
    let out = bin()
        .args(["cumulants", "--order", "2"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    let norm: Vec<f64> = v["norm_cumulants"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert_eq!(norm, vec![1.5, 2.5]);
    assert!(v["chisq_cumulants"].is_null());

    let out = bin()
        .args(["cumulants", "--order", "21"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn malformed_input_is_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_spec(&dir, "spec.json", "{not json");
    let out = bin().args(["characterize"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = bin()
        .args(["characterize", "/nonexistent/spec.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validation_failures_are_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    // ragged covariance row
    let path = write_spec(
        &dir,
        "ragged.json",
        r#"{"mu": [0.0, 0.0], "cov": [[1.0, 0.0], [0.0]]}"#,
    );
    let out = bin().args(["characterize"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(3));

    // mu/cov dimension mismatch
    let path = write_spec(
        &dir,
        "dim.json",
        r#"{"mu": [0.0], "cov": [[1.0, 0.0], [0.0, 1.0]]}"#,
    );
    let out = bin().args(["characterize"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(3));

    // not symmetric
    let path = write_spec(
        &dir,
        "asym.json",
        r#"{"mu": [0.0, 0.0], "cov": [[1.0, 0.3], [0.0, 1.0]]}"#,
    );
    let out = bin().args(["characterize"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(3));

    // negative eigenvalue
    let path = write_spec(
        &dir,
        "indef.json",
        r#"{"mu": [0.0, 0.0], "cov": [[1.0, 2.0], [2.0, 1.0]]}"#,
    );
    let out = bin().args(["characterize"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_pass_and_gate_failure() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_spec(&dir, "spec.json", RANK_ONE);
    let out = bin()
        .args(["verify", "--samples", "20000", "--seed", "7"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    assert_eq!(v["passed"], Value::Bool(true));
    assert_eq!(v["sample_count"], Value::from(20000));
    assert_eq!(v["seed"], Value::from(7));
    assert_eq!(v["generator_id"], Value::from("chacha8-boxmuller-v1"));
    assert!(v["ks_p_value"].as_f64().unwrap() >= 0.01);
    assert_eq!(v["sample_cumulants"].as_array().unwrap().len(), 4);

    // an impossibly strict alpha forces the gate to fail on a "yes" verdict
    let out = bin()
        .args(["verify", "--samples", "20000", "--seed", "7", "--ks-alpha", "1.0"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));

    // "no" verdicts report the best-fit mismatch but exit 0
    let path = write_spec(&dir, "no.json", DIAG_HALF);
    let out = bin()
        .args(["verify", "--samples", "20000", "--seed", "7"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    assert_eq!(v["verdict"]["is_chi_square"], Value::Bool(false));
    assert_eq!(v["mismatch_order"], Value::from(2));
}

#[test]
fn verify_too_few_samples_is_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_spec(&dir, "spec.json", RANK_ONE);
    let out = bin()
        .args(["verify", "--samples", "5"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn generate_round_trips_through_characterize_via_stdin() {
    let out = bin()
        .args([
            "generate", "--dim", "4", "--rank", "2", "--ncp", "1.5", "--seed", "42",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));

    let mut child = bin()
        .args(["characterize", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(&out.stdout).unwrap();
    let out2 = child.wait_with_output().unwrap();
    assert_eq!(out2.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out2.stdout).unwrap();
    assert_eq!(v["verdict"]["is_chi_square"], Value::Bool(true));
    assert_eq!(v["verdict"]["df"], Value::from(2));
    assert!((v["verdict"]["ncp"].as_f64().unwrap() - 1.5).abs() <= 1e-9);
}

#[test]
fn generate_rejects_bad_parameters() {
    let out = bin()
        .args(["generate", "--dim", "2", "--rank", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));

    let out = bin()
        .args(["generate", "--dim", "2", "--rank", "0", "--ncp", "1.0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn generator_env_pin() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_spec(&dir, "spec.json", RANK_ONE);
    // pinning the implemented generator id is accepted
    let out = bin()
        .args(["verify", "--samples", "10000"])
        .arg(&path)
        .env("CHI2GEO_GENERATOR", "chacha8-boxmuller-v1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    // any other id is refused before touching the spec
    let out = bin()
        .args(["verify", "--samples", "10000"])
        .arg(&path)
        .env("CHI2GEO_GENERATOR", "mt19937-ziggurat-v0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_spec(&dir, "spec.json", RANK_ONE);
    let run = || {
        bin()
            .args(["verify", "--samples", "30000", "--seed", "11"])
            .arg(&path)
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn human_format_renders_prose() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_spec(&dir, "spec.json", RANK_ONE);
    let out = bin()
        .args(["characterize", "--format", "human"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("chi-square"));
    assert!(text.contains("df"));
}
