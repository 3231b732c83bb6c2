use std::process::Command;

use serde_json::{json, Value};
use stringcount::cli::run;

fn call(args: &[&str]) -> (i32, Value) {
    let mut argv = vec!["stringcount"];
    argv.extend_from_slice(args);
    let out = run(argv);
    (out.code, out.json().unwrap_or(Value::Null))
}

#[test]
fn rnum_worked_example() {
    let (code, v) = call(&["rnum", "--type", "A1^1", "--nu", "1,1:4", "--pattern", "1,1:2"]);
    assert_eq!(code, 0);
    assert_eq!(v["R"], json!(2));
    assert_eq!(v["detF"], json!(4));
    assert_eq!(v["P"], json!([["1,1", 0]]));
    assert_eq!(v["generic_condition"], json!(true));
}

#[test]
fn rnum_empty_pattern() {
    let (code, v) = call(&["rnum", "--type", "A1^1", "--nu", "1,1:1", "--pattern", ""]);
    assert_eq!(code, 0);
    assert_eq!(v["R"], json!(1));
}

#[test]
fn rnum_negative_vacancy_regime() {
    let (code, v) = call(&["rnum", "--type", "A1^1", "--nu", "1,2:1", "--pattern", "1,1:1;1,2:1"]);
    assert_eq!(code, 0);
    assert_eq!(v["R"], json!(-4));
    assert_eq!(v["regime"], json!("formal"));
}

#[test]
fn sce_both_methods() {
    let (code, v) = call(&["sce", "--type", "A1^1", "--nu", "1,1:4", "--pattern", "1,1:2", "--method", "both"]);
    assert_eq!(code, 0);
    assert_eq!(v["det"], json!(8));
    assert_eq!(v["total"], json!(8));
    assert_eq!(v["off_diagonal"], json!(4));
    assert_eq!(v["diagonal"], json!(4));
    assert_eq!(v["R"], json!(2));
    assert_eq!(v["N_factorial_product"], json!(2));
    assert_eq!(v["match"], json!(true));
}

#[test]
fn sce_moebius_only() {
    let (code, v) = call(&["sce", "--type", "A1^1", "--nu", "1,1:4", "--pattern", "1,1:2", "--method", "moebius"]);
    assert_eq!(code, 0);
    assert_eq!(v["off_diagonal"], json!(4));
    assert_eq!(v["match"], json!(true));
}

#[test]
fn sce_empty_pattern_is_rejected() {
    let out = run(["stringcount", "sce", "--type", "A1^1", "--nu", "1,1:1", "--pattern", ""]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("empty"));
}

#[test]
fn sce_singular_is_reported() {
    let (code, v) = call(&["sce", "--type", "A1^1", "--nu", "1,1:2", "--pattern", "1,1:2"]);
    assert_eq!(code, 1);
    assert_eq!(v["det"], json!(0));
    assert_eq!(v["singular"], json!(true));
}

#[test]
fn parse_errors_exit_two() {
    for args in [
        vec!["rnum", "--type", "B2^1", "--nu", "1,1:1", "--pattern", ""],
        vec!["rnum", "--type", "A1^1", "--nu", "1,0:1", "--pattern", ""],
        vec!["rnum", "--type", "A1^1", "--nu", "2,1:1", "--pattern", ""],
        vec!["rseries", "--type", "A1^1", "--nu", "1,1:1"],
        vec!["frobnicate"],
        vec!["sce", "--type", "A1^1", "--nu", "1,1:4", "--pattern", "1,1:2", "--method", "guess"],
    ] {
        let mut argv = vec!["stringcount"];
        argv.extend(args.iter().copied());
        let out = run(argv);
        assert_eq!(out.code, 2, "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn rseries_spin_one() {
    let (code, v) = call(&["rseries", "--type", "A1^1", "--nu", "1,2:1", "--deg", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["text"], json!("1 + y1 + y1^2"));
}

#[test]
fn qcheck_twisted() {
    let (code, v) = call(&["qcheck", "--type", "A2^2", "--deg", "4", "--mmax", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["ok"], json!(true));
    assert_eq!(v["residuals"].as_array().unwrap().len(), 2);
}

#[test]
fn complete_type_a() {
    let (code, v) = call(&["complete", "--type", "A2^1", "--nu", "1,1:1;2,1:1", "--deg", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["match"], json!(true));
    assert_eq!(v["mismatches"], json!([]));
    let out = run(["stringcount", "complete", "--type", "C2^1", "--nu", "1,1:1", "--deg", "2"]);
    assert_eq!(out.code, 2);
}

#[test]
fn orders_report() {
    let (code, v) =
        call(&["orders", "--type", "A1^1", "--nu", "1,1:4", "--pattern", "1,1:2", "--a", "1", "--m", "1", "--i", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["lhs"], json!(0));
    assert_eq!(v["rhs"], json!(0));
    assert_eq!(v["Delta"], Value::Null);
}

#[test]
fn algebra_dump() {
    let (code, v) = call(&["algebra", "--type", "A2^2"]);
    assert_eq!(code, 0);
    assert_eq!(v["ntilde"], json!(2));
    assert_eq!(v["kappa0"], json!(2));
    assert_eq!(v["cartan_g0"], json!([[2]]));
}

#[test]
fn output_is_deterministic_and_written_to_file() {
    let dir = std::env::temp_dir().join(format!("stringcount-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.json");
    let p = path.to_str().unwrap();
    let a = run(["stringcount", "--out", p, "rseries", "--type", "C2^1", "--nu", "1,1:1;2,1:1", "--deg", "3"]);
    let b = run(["stringcount", "rseries", "--type", "C2^1", "--nu", "1,1:1;2,1:1", "--deg", "3"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(std::fs::read_to_string(&path).unwrap().trim_end(), a.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_stringcount");
    let ok = Command::new(bin)
        .args(["sce", "--type", "A1^1", "--nu", "1,1:4", "--pattern", "1,1:2", "--method", "both"])
        .env("STRINGCOUNT_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["off_diagonal"], json!(4));
    let bad = Command::new(bin).args(["rnum", "--type", "A1^1"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
