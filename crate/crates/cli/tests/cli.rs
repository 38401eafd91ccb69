use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use tempfile::NamedTempFile;

fn jfx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jfx")).args(args).output().unwrap()
}

fn jfx_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_jfx"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn file(contents: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

const H2: &str = r#"{"breakpoints": ["0", "1/2", "1"], "values": [1, -1]}"#;
const TENT: &str = "t,f\n0,0\n1/2,1\n1,0\n";

#[test]
fn norm_of_h2() {
    let f = file(H2);
    let out = jfx(&["norm", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["value"].as_f64().unwrap() - 0.5f64.sqrt()).abs() <= 1e-12);
    assert_eq!(v["mode"], "exact");
    assert_eq!(v["dual"]["coefficients"].as_array().unwrap().len(), 2);
}

#[test]
fn norm_reads_stdin_and_grids() {
    let grid = r#"{"cuts": [["0","1/2","1"], ["0","1/2","1"]], "cells": [[1,-1],[-1,1]]}"#;
    let out = jfx_stdin(&["norm", "-"], grid);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["value"].as_f64().unwrap(), 0.5);
}

#[test]
fn lorentz_space_flag() {
    let f = file(H2);
    let out = jfx(&["--space", "lorentz:p=1,w=harmonic", "norm", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    // ‖(1/2, 1/2)‖ = 1/2 + 1/4 beats the single-cell value 0.
    assert!((json(&out)["value"].as_f64().unwrap() - 0.75).abs() <= 1e-12);
}

#[test]
fn malformed_input_fails() {
    let f = file(r#"{"breakpoints": ["0", "1"], "values": [1, 2]}"#);
    let out = jfx(&["norm", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
    let out = jfx(&["norm", "/nonexistent/input.json"]);
    assert_eq!(out.status.code(), Some(1));
    let out = jfx(&["--space", "lp:0.5", "norm", "-"]);
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn budget_exhaustion_reports_lower_bound() {
    let values: Vec<String> = (0..30).map(|i: i64| ((i * 7919) % 19 - 9).to_string()).collect();
    let bps: Vec<String> = (0..=30).map(|i| format!("\"{i}/30\"")).collect();
    let f = file(&format!(
        r#"{{"breakpoints": [{}], "values": [{}]}}"#,
        bps.join(","),
        values.join(",")
    ));
    let path = f.path().to_str().unwrap();
    let out = jfx(&[
        "--space",
        "lorentz:p=2,w=harmonic",
        "--bounded",
        "--node-budget",
        "1000",
        "norm",
        path,
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["mode"], "lower_bound");
    let out = jfx(&[
        "--space",
        "lorentz:p=2,w=harmonic",
        "--node-budget",
        "1000",
        "norm",
        path,
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn var_tent_with_split() {
    let f = file(TENT);
    let out = jfx(&["var", f.path().to_str().unwrap(), "--split", "1/2", "--modulus", "1/4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    // Up then down: ‖(1, −1)‖₂.
    assert!((v["value"].as_f64().unwrap() - 2f64.sqrt()).abs() <= 1e-12);
    assert_eq!(v["split"]["support_measure"], "1/2");
    assert_eq!(v["modulus"].as_array().unwrap().len(), 1);
}

#[test]
fn var_rejects_nonzero_start() {
    let f = file("0,1\n1,0\n");
    let out = jfx(&["var", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("f(0)=0"));
}

#[test]
fn ccp_growth_csv() {
    let out = jfx(&["--space", "lorentz:p=2,w=harmonic", "ccp", "--schedule", "4,5,6"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("K,value,control,asymptotic"));
    let values: Vec<f64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(values.len(), 3);
    assert!(values.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn ccp_bad_ratios_fail() {
    let out = jfx(&["ccp", "--schedule", "2,3", "--ratios", "1,1"]);
    assert_eq!(out.status.code(), Some(1));
    let out = jfx(&["ccp", "--schedule", "3,2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn ccp_rademacher_prefixes() {
    let out = jfx(&["ccp", "--rademacher", "1,3,5,7", "--out", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json(&out);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!((rows[0]["value"].as_f64().unwrap() - 1.0).abs() <= 1e-12);
    assert!(rows.iter().all(|r| r["value"].as_f64().unwrap() <= 7.0));
}

#[test]
fn verify_suites() {
    let out = jfx(&["verify", "symnorm", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(
        String::from_utf8_lossy(&out.stdout)
            .lines()
            .filter(|l| l.starts_with("PASS"))
            .count()
            >= 6
    );
    let out = jfx(&["verify", "nonsense"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("symnorm"));
}

#[test]
fn output_is_deterministic() {
    let f = file(TENT);
    let args = [
        "--space",
        "lorentz:p=1.5,w=harmonic",
        "var",
        f.path().to_str().unwrap(),
        "--split",
        "1/3",
    ];
    let a = jfx(&args);
    let b = jfx(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let a = jfx(&["ccp", "--seed", "9"]);
    assert_eq!(a.stdout, jfx(&["ccp", "--seed", "9"]).stdout);
}
