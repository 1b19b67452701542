use std::process::{Command, Output};

use cdo_core::parse::parse_form;
use cdo_core::vertex::VAState;
use serde_json::Value;

fn cdo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdo")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json document")
}

fn verdicts(doc: &Value) -> Vec<String> {
    doc["checks"].as_array().unwrap().iter().map(|c| c["verdict"].as_str().unwrap().to_string()).collect()
}

#[test]
fn mode_apply_number_operator() {
    let out = cdo(&["mode-apply", "--rank", "1", "--state", "c[1,0]*b[1,-1]", "--mode", "0", "--on", "c[1,0]"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["payload"], "c[1,0]");
    assert_eq!(doc["schema"], "cdo-result/1");
    let out = cdo(&["mode-apply", "--rank", "1", "--state", "c[1,0]^2*b[1,-1]", "--mode", "0", "--on", "c[1,0]^3"]);
    assert_eq!(json(&out)["payload"], "3*c[1,0]^4");
}

#[test]
fn msv_check_example() {
    let out = cdo(&["msv-check", "--rank", "2", "--x", "t1*t2 d1", "--y", "t1*t2 d2", "--max-weight", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["payload"]["cocycle"], "-dt1^dt2");
    assert_eq!(verdicts(&doc), vec!["pass"]);
}

#[test]
fn eisenstein_square_lattice() {
    let out = cdo(&["eisenstein", "--weight", "6", "--tau", "0,1", "--cutoff", "200"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let re = doc["payload"]["lattice"]["re"].as_f64().unwrap();
    let im = doc["payload"]["lattice"]["im"].as_f64().unwrap();
    assert!(re.hypot(im) < 1e-6);
    let out = cdo(&["eisenstein", "--weight", "4", "--tau", "0,1", "--cutoff", "200", "--q-order", "3"]);
    assert_eq!(json(&out)["payload"]["normalized-q-series"], "1/120 + 2*q + 18*q^2 + 56*q^3");
}

#[test]
fn verification_failure_exits_one() {
    let out = cdo(&["eisenstein", "--weight", "4", "--tau", "0,1", "--cutoff", "2", "--tolerance", "1e-12"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(verdicts(&json(&out)), vec!["fail"]);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(cdo(&["mode-apply", "--rank", "1"]).status.code(), Some(2));
    assert_eq!(cdo(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(cdo(&["eisenstein", "--weight", "2", "--tau", "0,1"]).status.code(), Some(2));
    assert_eq!(cdo(&["eisenstein", "--weight", "4", "--tau", "0"]).status.code(), Some(2));
    assert_eq!(cdo(&["feynman", "t-limits", "--eps", "2"]).status.code(), Some(2));
}

#[test]
fn parse_errors_carry_a_caret() {
    let out = cdo(&["ch2", "--rank", "2", "--x", "t1*t2 d1 + * d2", "--y", "t1 d1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    let lines: Vec<_> = err.lines().collect();
    assert!(lines[0].starts_with("error:"), "{err}");
    assert_eq!(lines[1].trim(), "t1*t2 d1 + * d2");
    assert_eq!(lines[2].find('^'), Some(2 + 11), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn out_file_matches_stdout_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("doc.json");
    let args = ["char-identity", "--rank", "1", "--chern-degree", "4", "--q-order", "6"];
    let mut with_out: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap();
    with_out.extend(["--out", p]);
    let a = cdo(&with_out);
    let b = cdo(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn keys_are_sorted() {
    let out = cdo(&["ch2", "--rank", "2", "--x", "t1*t2 d1", "--y", "t1*t2 d2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let top: Vec<_> = text.lines().filter(|l| l.starts_with("  \"")).map(|l| l.trim().split('"').nth(1).unwrap()).collect();
    let mut sorted = top.clone();
    sorted.sort();
    assert_eq!(top, sorted);
}

#[test]
fn emitted_expressions_reparse() {
    let out = cdo(&["rho-w", "--rank", "2", "--x", "t1^2*t2 d1 - t2 d2", "--on", "b[1,-1]*c[2,-1] + c[1,0]^2*b[2,-2]"]);
    let s = json(&out)["payload"].as_str().unwrap().to_string();
    assert_eq!(VAState::parse(&s, 2).unwrap().to_string(), s);
    let out = cdo(&["gms-d1", "--rank", "2", "--x", "t1*t2 d1", "--y", "t1*t2 d2"]);
    let doc = json(&out);
    for key in ["lie-value", "ch2"] {
        let s = doc["payload"][key].as_str().unwrap();
        assert_eq!(parse_form(s, 2, 8).unwrap().to_string(), s);
    }
}

#[test]
fn verification_commands_pass() {
    let cases: &[&[&str]] = &[
        &["borcherds", "--rank", "1", "--a", "b[1,-1]", "--b", "b[1,-1]", "--c", "c[1,0]^2", "--l", "0", "--m", "0"],
        &["pw-check", "--f1", "(t1+t2*t3, t2+t1^2, t3)", "--f2", "(t1+t3^2, t2+t1*t3, t3+t2^2)"],
        &["gms-d1", "--rank", "3", "--x", "t1*t2 d3", "--y", "t3^2 d1"],
        &["c1", "--rank", "1", "--x", "t1^2 d1"],
        &["conformal-check", "--rank", "2", "--max-weight", "3"],
        &["witten-exp-check", "--rank", "2", "--chern-degree", "6", "--q-order", "4"],
        &["feynman", "t-limits", "--eps", "1e-7"],
    ];
    for args in cases {
        let out = cdo(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(verdicts(&json(&out)).iter().all(|v| v == "pass"), "{args:?}");
    }
}

#[test]
fn c1_and_atiyah_payloads() {
    let doc = json(&cdo(&["c1", "--rank", "1", "--x", "t1^2 d1"]));
    assert_eq!(doc["payload"]["c1"], "2 dt1");
    assert_eq!(doc["payload"]["anomaly"], "2 dt1");
    let doc = json(&cdo(&["atiyah", "--rank", "2", "--x", "t1*t2 d1"]));
    assert_eq!(doc["payload"][0][0], "-dt2");
    assert_eq!(doc["payload"][0][1], "-dt1");
    assert_eq!(doc["payload"][1][1], "0");
}

#[test]
fn witten_log_lowest_term() {
    let doc = json(&cdo(&["witten-log", "--rank", "1", "--chern-degree", "4", "--q-order", "1"]));
    let terms = doc["payload"]["terms"].as_array().unwrap();
    assert_eq!(terms[0]["coeff"], "1/2880");
    assert_eq!(terms[0]["roots"], serde_json::json!([4]));
}

#[test]
fn wheel2_from_profile_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bumps.txt");
    std::fs::write(&path, "# standard pair\nF 0 0 1 1\nG 0.5 0.2 1 1\n").unwrap();
    let out = cdo(&["feynman", "wheel2", "--profiles", path.to_str().unwrap(), "--grid", "24"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(json(&out)["payload"]["relative-error"].as_f64().unwrap() < 0.05);
    let missing = cdo(&["feynman", "wheel2", "--profiles", "/nonexistent/bumps"]);
    assert_eq!(missing.status.code(), Some(2));
}
