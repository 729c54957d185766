use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclolab")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    v
}

#[test]
fn symbols_report_values() {
    let v = json(&["symbols", "--legendre", "2", "7"]);
    assert_eq!((v["op"].as_str(), v["value"].as_i64()), (Some("legendre"), Some(1)));
    let v = json(&["symbols", "--jacobi", "2", "15"]);
    assert_eq!(v["value"], 1);
    let out = run(&["--format", "text", "symbols", "--legendre", "3", "7"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "-1");
}

#[test]
fn quad_report_fields() {
    let v = json(&["quad", "--D", "229"]);
    assert_eq!((v["D"].as_i64(), v["h"].as_u64(), v["h_plus"].as_u64()), (Some(229), Some(3), Some(3)));
    assert_eq!(v["unit"]["x_den"], "2");
    let v = json(&["quad", "--D", "-23"]);
    assert_eq!(v["class_group"], serde_json::json!([3]));
    assert!(v["unit"].is_null());
}

#[test]
fn quad_range_is_csv() {
    let out = run(&["quad", "--range", "-8", "13"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "D,h,h_plus,unit_norm");
    assert_eq!(lines[1..], ["-8,1,1,1", "-7,1,1,1", "-4,1,1,1", "-3,1,1,1", "5,1,1,-1", "8,1,1,-1", "12,1,2,1", "13,1,1,-1"]);
}

#[test]
fn towers_scan_is_csv() {
    let out = run(&["towers", "--scan-c2", "--min", "5", "--max", "30"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "p,h,infinite\n5,1,false\n13,1,false\n29,1,false\n");
}

#[test]
fn c2_carries_note() {
    let v = json(&["towers", "--c2", "13693"]);
    assert_eq!((v["h"].as_u64(), v["infinite"].as_bool()), (Some(15), Some(true)));
    assert!(v["note"].as_str().unwrap().contains("complex cyclic quartic"));
}

#[test]
fn hminus_full_field_and_subfield() {
    let v = json(&["hminus", "--modulus", "31", "--degree", "6"]);
    assert_eq!(v["h_minus"], "9");
    let v = json(&["hminus", "--modulus", "23"]);
    assert_eq!(v["h_minus"], "3");
}

#[test]
fn galmod_tate_and_enumeration() {
    let v = json(&["galmod", "--tate", "3:1,1,1:0,0,1,1,0,0,0,1,0"]);
    assert_eq!((v["h0"]["order"].as_u64(), v["h_minus1"]["order"].as_u64()), (Some(1), Some(1)));
    let v = json(&["galmod", "--enumerate", "3", "9", "--check", "inaba"]);
    assert_eq!(v["counterexamples"], serde_json::json!([]));
    let out = run(&["galmod", "--enumerate", "3", "9", "--check", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn negative_bound_is_a_config_error() {
    let out = run(&["--bound", "-1", "paper-suite"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--bound"));
    let out = run(&["--jobs", "0", "symbols", "--octic8", "17"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_memory_cap_is_a_config_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_cyclolab"))
        .env("CYCLOLAB_MAX_MEM_MB", "lots")
        .args(["galmod", "--e1e2", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn suite_subset_and_determinism() {
    let args = ["--format", "json", "--only", "hminus", "paper-suite"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let ids: Vec<u64> = v["checks"].as_array().unwrap().iter().map(|c| c["id"].as_u64().unwrap()).collect();
    assert_eq!(ids, [4, 5, 6]);
    let out = run(&["--only", "nothing", "paper-suite"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failing_suite_exits_one() {
    // the quad group contains the norm check for 1765, whose unit has norm -1
    let out = run(&["--only", "quad", "paper-suite"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}
