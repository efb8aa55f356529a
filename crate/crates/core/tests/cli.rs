use serde_json::Value;
use std::process::Command;
use toric_orbifold::cli::{parse_group, parse_matrix, run, CommandOutput};
use toric_orbifold::duval::GroupSpec;
use toric_orbifold::molien::MolienResult;
use toric_orbifold::obstruction::OrbifoldVerdict;

fn call(args: &[&str]) -> CommandOutput {
    run(args.iter().copied())
}

fn json(args: &[&str]) -> Value {
    let out = call(args);
    assert_eq!(out.status, 0, "{args:?}: {}{}", out.stdout, out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn analyze_reports_simplicial() {
    let v = json(&["analyze", "-A", "-1 1 2", "--json"]);
    assert_eq!(v["simplicial"], true);
    assert_eq!(v["effectiveness"]["effective"], true);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 2);
    assert!(v["standard_form"].is_object());
    let v = json(&["analyze", "-A", "1 -1 1 -1 0 0; 0 0 0 0 1 -1", "--json"]);
    assert_eq!(v["simplicial"], false);
    assert_eq!(v["vertex_count"], 5);
    let text = call(&["analyze", "-A", "-1 1 2"]);
    assert!(text.stdout.contains("simplicial: true"));
}

#[test]
fn hilbert_output() {
    let v = json(&["hilbert", "-A", "-1 1 1", "--order", "8", "--json"]);
    assert_eq!(v["coefficients"], serde_json::json!([1, 0, 8, 0, 27, 0, 64, 0, 125]));
    let text = call(&["hilbert", "-A", "-1 1 1", "--order", "4"]);
    assert_eq!(text.status, 0);
    assert!(text.stdout.contains("27"));
}

#[test]
fn basis_output() {
    let v = json(&["basis", "-A", "-1 1 2", "--order", "4", "--json"]);
    assert_eq!(v["generators"].as_array().unwrap().len(), 11);
    assert_eq!(v["complete"], true);
}

#[test]
fn molien_output_round_trips() {
    let out = call(&["molien", "--group", "su2:3", "--order", "8", "--json"]);
    assert_eq!(out.status, 0);
    let r: MolienResult = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(r.coefficients, vec![1, 0, 4, 8, 9, 20, 30, 36, 57]);
    let v = json(&["molien", "--group", r#"{"type":"duval3b","m":1,"l":1}"#, "--order", "4", "--json"]);
    assert_eq!(v["coefficients"], serde_json::json!([1, 2, 6, 10, 19]));
}

#[test]
fn check_orbifold_output() {
    let v = json(&["check-orbifold", "-A", "-1 1 1", "--order", "6", "--cap", "48", "--json"]);
    assert_eq!(v["verdict"], "no_finite_match_up_to_bound");
    let count = v["certificate_count"].as_u64().unwrap();
    assert!(count > 20);
    assert_eq!(v["certificates"].as_array().unwrap().len(), 20);
    assert_eq!(v["certificates_truncated"], true);
    let total: u64 = v["certificate_summary"].as_array().unwrap().iter().map(|s| s["count"].as_u64().unwrap()).sum();
    assert_eq!(total, count);

    let out = call(&["check-orbifold", "-A", "-1 1 1", "--order", "6", "--cap", "48", "--json", "--all-certificates"]);
    let verdict: OrbifoldVerdict = serde_json::from_str(&out.stdout).unwrap();
    match verdict {
        OrbifoldVerdict::NoFiniteMatchUpToBound { certificates, .. } => assert_eq!(certificates.len() as u64, count),
        other => panic!("{}", other.name()),
    }
    let v = json(&["check-orbifold", "-A", "-1 2", "--json"]);
    assert_eq!(v["verdict"], "dim2_orbifold");
    assert_eq!(v["target_n"], 3);
    let text = call(&["check-orbifold", "-A", "-1 -1 1 1"]);
    assert!(text.stdout.starts_with("verdict: NotRationalHomologyManifold"));
}

#[test]
fn dim2_and_duval_list() {
    let v = json(&["dim2", "-A", "-1 2", "--json"]);
    assert_eq!(v["data"]["big_n"], 3);
    let v = json(&["duval-list", "--cap", "4", "--json"]);
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(!names.is_empty());
    for c in v.as_array().unwrap() {
        let _: GroupSpec = serde_json::from_value(c["spec"].clone()).unwrap();
        assert!(c["order"].as_u64().unwrap() <= 4);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(call(&["hilbert", "-A", "1 2; 3"]).status, 2);
    assert_eq!(call(&["hilbert", "-A", "x"]).status, 2);
    assert_eq!(call(&["molien", "--group", "su2:0"]).status, 2);
    assert_eq!(call(&["molien", "--group", "bogus"]).status, 2);
    assert_eq!(call(&["frobnicate"]).status, 2);
    assert_eq!(call(&["--help"]).status, 0);
    let out = call(&["molien", "--group", "su2:3", "--order", "70"]);
    assert_eq!(out.status, 1);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["error"], "molien");
    let out = call(&["check-orbifold", "-A", "-1 1 1", "--order", "3"]);
    assert_eq!(out.status, 1);
}

#[test]
fn deterministic_bytes() {
    let args = ["check-orbifold", "-A", "-1 1 2", "--order", "6", "--cap", "60", "--json", "--all-certificates"];
    let a = call(&args);
    let b = call(&args);
    assert_eq!(a.stdout, b.stdout);
    let a = call(&["duval-list", "--cap", "30"]);
    let b = call(&["duval-list", "--cap", "30"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn parsers() {
    assert_eq!(parse_matrix("-1 1 2").unwrap().rows_i64(), vec![vec![-1, 1, 2]]);
    assert_eq!(parse_matrix(" 1 -1 0 ; 0 1 -1 ").unwrap().rows_i64(), vec![vec![1, -1, 0], vec![0, 1, -1]]);
    assert!(parse_matrix("").is_err());
    assert_eq!(parse_group("dihedral:3").unwrap(), GroupSpec::BinaryDihedral { n: 3 });
    assert_eq!(parse_group("T").unwrap(), GroupSpec::BinaryTetrahedral);
    assert_eq!(parse_group("duval1:3,1,3,1,1").unwrap(), GroupSpec::Duval1 { m: 3, n: 1, f: 3, g: 1, d: 1 });
    assert!(parse_group("duval1:3,1").is_err());
    // well-formed but invalid parameters are still rejected as parse errors
    assert_eq!(call(&["molien", "--group", "duval3:2,1"]).status, 2);
}

#[test]
fn binary_exit_status_and_threads() {
    let exe = env!("CARGO_BIN_EXE_toric-orbifold");
    let out = Command::new(exe)
        .args(["hilbert", "-A", "-1 1 2", "--order", "7", "--json"])
        .env("TORIC_ORBIFOLD_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["coefficients"], serde_json::json!([1, 0, 4, 6, 9, 16, 26, 30]));
    let out = Command::new(exe).args(["hilbert", "-A", "a b"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
