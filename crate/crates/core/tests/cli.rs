use std::io::Write;
use std::process::{Command, Stdio};

use serde_json::Value;
use solidangle::cli::run;

fn ok_json(args: &[&str]) -> Value {
    let o = run(std::iter::once("solidangle").chain(args.iter().copied()));
    assert_eq!(o.code, 0, "{args:?}: {}", o.stderr);
    serde_json::from_str(&o.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(std::iter::once("solidangle").chain(args.iter().copied())).code
}

fn write_temp(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("solidangle-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn reeve_solid_polynomial() {
    let v = ok_json(&["solidpoly", "--family", "reeve", "--h", "12"]);
    let c = v["output"]["coefficients"].as_array().unwrap();
    assert_eq!(c.len(), 4);
    assert_eq!(c[0]["exact"], "0");
    assert_eq!(c[2]["exact"], "0");
    assert_eq!(c[3]["exact"], "2");
    let linear = c[1]["value"].as_f64().unwrap();
    assert!(linear < 0.0 && linear > -2.0);
    let s = ok_json(&["vertexsum", "--family", "reeve", "--h", "12"]);
    let sum = s["output"]["vertex_sum"]["value"].as_f64().unwrap();
    assert!((linear - (sum - 2.0)).abs() < 1e-9);
    assert_eq!(c[1]["methods"][0], "exact");
}

#[test]
fn reeve_hstar() {
    let v = ok_json(&["hstar", "--family", "reeve", "--h", "12"]);
    assert_eq!(v["output"]["hstar"], serde_json::json!([1, 0, 11, 0]));
}

#[test]
fn family_output_feeds_other_commands() {
    let tetra = run(["solidangle", "family", "regular-tetrahedron"]);
    assert_eq!(tetra.code, 0);
    let path = write_temp("tetra.json", &tetra.stdout);
    let v = ok_json(&["vertexsum", "--file", &path]);
    let s = v["output"]["vertex_sum"]["value"].as_f64().unwrap();
    assert!((s - 0.1755).abs() < 1e-4);

    for args in [
        vec!["reeve", "--h", "3"],
        vec!["delta", "--d", "3", "--h", "-4"],
        vec!["cube", "--d", "3"],
        vec!["cross-polytope", "--d", "2"],
        vec!["standard-simplex", "--d", "3"],
    ] {
        let mut full = vec!["family"];
        full.extend(&args);
        let out = run(std::iter::once("solidangle").chain(full.iter().copied()));
        assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
        let path = write_temp(&format!("{}.json", args[0]), &out.stdout);
        let mut direct = vec!["ehrhart", "--family"];
        direct.extend(&args);
        let a = ok_json(&direct);
        let b = ok_json(&["ehrhart", "--file", &path]);
        assert_eq!(a["output"], b["output"], "{args:?}");
        assert_eq!(a["input"]["digest"], b["input"]["digest"]);
    }
}

#[test]
fn reports_are_deterministic() {
    let args = ["--policy", "mc", "--mc-samples", "20000", "--seed", "9", "vertexsum", "--family", "cube", "--d", "4"];
    let a = run(std::iter::once("solidangle").chain(args));
    let b = run(std::iter::once("solidangle").chain(args));
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    let mut other = args;
    other[5] = "10";
    assert_ne!(a.stdout, run(std::iter::once("solidangle").chain(other)).stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--no-such-flag"]), 1);
    assert_eq!(code(&["solidpoly"]), 1);
    assert_eq!(code(&["family", "no-such-family"]), 1);
    let flat = write_temp("flat.json", r#"{"vertices": [["0", "0"], ["1", "1"], ["2", "2"]]}"#);
    assert_eq!(code(&["ehrhart", "--file", &flat]), 1);
    // too few samples to certify positivity
    assert_eq!(code(&["--policy", "mc", "--mc-samples", "5", "numerator", "--family", "reeve", "--h", "1"]), 2);
    assert_eq!(code(&["numerator", "--family", "reeve", "--h", "1"]), 0);
}

#[test]
fn usage_errors_explain_themselves() {
    let o = run(["solidangle", "--no-such-flag"]);
    assert!(o.stderr.contains("Usage"));
    assert!(o.stdout.is_empty());
}

#[test]
fn verify_table_passes() {
    let o = run(["solidangle", "verify"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    assert!(o.stdout.lines().any(|l| l.starts_with("PASS")));
    assert!(!o.stdout.lines().any(|l| l.starts_with("FAIL")));
}

#[test]
fn reads_polytope_from_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_solidangle"))
        .args(["hstar", "--file", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"{"vertices": [["0","0","0"],["1","0","0"],["0","1","0"],["1","1","5"]]}"#)
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["output"]["hstar"], serde_json::json!([1, 0, 4, 0]));
    assert_eq!(v["input"]["source"], "-");
}
