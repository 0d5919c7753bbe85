use std::fs;
use std::path::Path;
use std::process::Command;

use transcend::cli::{run_with, ANALYZE_COLUMNS};

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut argv = vec!["transcend"];
    argv.extend_from_slice(args);
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn spec_file(dir: &Path, name: &str, json: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, json).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn term_and_theta() {
    let dir = tempfile::tempdir().unwrap();
    let f = spec_file(dir.path(), "f.json", r#"{"family":"factorialExp","base":"2","offset":"1"}"#);
    let (code, out, _) = run(&["term", "--spec", &f, "--n", "3"]);
    assert_eq!((code, out.as_str()), (0, "128\n"));

    let p = spec_file(dir.path(), "p.json", r#"{"family":"power","a1":"2","e":"4"}"#);
    let (code, out, _) = run(&["term", "--spec", &p, "--n", "2", "--theta", "--digits", "4"]);
    assert_eq!((code, out.as_str()), (0, "9/16\n0.5625\n"));
}

#[test]
fn analyze_columns_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let p = spec_file(dir.path(), "p.json", r#"{"family":"power","a1":"2","e":"4"}"#);
    let (code, csv, _) = run(&["analyze", "--spec", &p, "--alpha", "5/2", "--k", "2", "--to", "3"]);
    assert_eq!(code, 0, "{csv}");
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), ANALYZE_COLUMNS.join(","));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&first[..8], &["1", "1", "pass", "pass", "pass", "pass", "pass", "pass"]);

    let (code, csv, _) = run(&["analyze", "--spec", &p, "--alpha", "5/2", "--k", "3/2", "--to", "3"]);
    assert_eq!(code, 1);
    assert!(csv.lines().nth(1).unwrap().contains("pass,pass,fail"));

    let (code, json, _) = run(&[
        "analyze", "--spec", &p, "--alpha", "5/2", "--to", "2", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let rows: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 2);
    assert_eq!(rows[1]["growth"], true);
    assert!(rows[1]["qGrowth"].is_null());
}

#[test]
fn measure_emits_evidence() {
    let dir = tempfile::tempdir().unwrap();
    let p = spec_file(dir.path(), "p.json", r#"{"family":"power","a1":"2","e":"4"}"#);
    let out_path = dir.path().join("ev.json");
    let (code, _, err) = run(&[
        "measure", "--spec", &p, "--alpha", "3", "--k", "3/2", "--poly=-1,1,1",
        "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let ev: transcend::MeasureEvidence =
        serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    assert!(ev.verified);
    assert_eq!(ev.bound.exponent.to_string(), "12");
    assert_eq!(ev.intermediate.unwrap().n1, 2);

    let (code, _, err) = run(&[
        "measure", "--spec", &p, "--alpha", "3", "--k", "3/2", "--poly=-1,2,1", "--height", "1",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("height"), "{err}");
}

#[test]
fn search_report_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    let p = spec_file(dir.path(), "p.json", r#"{"family":"power","a1":"2","e":"4"}"#);
    let rows = dir.path().join("rows.csv");
    let (code, out, err) = run(&[
        "search", "--spec", &p, "--degree", "1", "--height", "1", "--depth", "3",
        "--rows", rows.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["result"]["argmin"]["coeffs"], serde_json::json!(["-1", "1"]));
    assert_eq!(report["result"]["count"], 8);
    assert_eq!(fs::read_to_string(&rows).unwrap().lines().count(), 9);

    let (code, _, err) = run(&["search", "--spec", &p, "--degree", "2", "--height", "1000"]);
    assert_eq!(code, 2);
    assert!(err.contains("enumeration-too-large"), "{err}");
}

#[test]
fn invalid_inputs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let p = spec_file(dir.path(), "p.json", r#"{"family":"power","a1":"2","e":"4"}"#);
    let bad = spec_file(dir.path(), "bad.json", r#"{"family":"lucas"}"#);
    assert_eq!(run(&["certify", "--spec", &p, "--alpha", "2", "--to", "3"]).0, 2);
    assert_eq!(run(&["certify", "--spec", &p, "--alpha", "five", "--to", "3"]).0, 2);
    assert_eq!(run(&["certify", "--spec", &bad, "--alpha", "5/2"]).0, 2);
    assert_eq!(run(&["certify", "--alpha", "5/2"]).0, 2);
    assert_eq!(run(&["certify", "--spec", "/nonexistent.json", "--alpha", "5/2"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    let (code, _, err) = run(&["term", "--spec", &p, "--n", "40", "--digit-budget", "1000"]);
    assert_eq!(code, 2);
    assert!(err.contains("overflow"), "{err}");
}

#[test]
fn binary_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let p = spec_file(
        dir.path(),
        "f3.json",
        r#"{"family":"factorialExp","base":"2","offset":"1","startOffset":3}"#,
    );
    let cert = dir.path().join("cert.json");
    let status = Command::new(env!("CARGO_BIN_EXE_transcend"))
        .args(["certify", "--spec", &p, "--alpha", "5/2", "--from", "1", "--to", "4"])
        .arg("--out")
        .arg(&cert)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let text = fs::read_to_string(&cert).unwrap();
    assert!(text.contains("\"startOffset\": 3"));
    let out = Command::new(env!("CARGO_BIN_EXE_transcend"))
        .arg("certify")
        .arg("--revalidate")
        .arg(&cert)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), text);
}
