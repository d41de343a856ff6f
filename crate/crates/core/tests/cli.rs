use std::process::{Command, Output};

use serde_json::Value;

fn wtcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wtcalc")).args(args).env_remove("WTCALC_LIMIT_MB").output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = wtcalc(args);
    assert!(out.status.success(), "{:?}: {}", args, String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn groups_order_one_knot() {
    let v = json(&["groups", "--order", "1", "--labels", "1", "--flavor", "plain", "--json"]);
    assert_eq!(v, serde_json::json!({"rank": 0, "torsion": [2]}));
}

#[test]
fn verify_levine_order_two() {
    let v = json(&["verify-levine", "--order", "2", "--labels", "2", "--json"]);
    assert_eq!(v["is_isomorphism"], Value::Bool(true));
    let text = String::from_utf8(wtcalc(&["verify-levine", "--order", "2", "--labels", "2"]).stdout).unwrap();
    assert!(text.contains("is_isomorphism: true"));
}

#[test]
fn milnor_of_borromean_braid() {
    let v = json(&["milnor", "--braid", "[A(1,3),A(2,3)]", "--strands", "3", "--order", "1", "--json"]);
    assert_eq!(v["in_kernel"], Value::Bool(true));
    assert_eq!(v["mu"]["123"].as_i64().map(i64::abs), Some(1));
    assert!(v["mu"].get("12").is_none());
}

#[test]
fn sato_levine_and_artin() {
    let v = json(&["sl", "--longitudes", "[x2,[x1,x2]]; [x1,[x1,x2]]^-1", "--strands", "2", "--order", "1", "--json"]);
    assert_eq!(v["sl"], "[X1,X2]");
    let v = json(&["artin", "--braid", "A(1,2)", "--strands", "2", "--order", "0", "--json"]);
    assert_eq!(v["images"][0], "x2^-1 x1 x2");
    assert_eq!(v["fixes_product"], Value::Bool(true));
}

#[test]
fn realize_and_eta() {
    let v = json(&["realize", "--tree", "<(1,2),3>", "--json"]);
    assert_eq!(v["strands"], 3);
    assert_eq!(v["length"], 12);
    let v = json(&["eta", "--order", "1", "--labels", "3", "--tree", "<(1,2),3>", "--flavor", "reduced", "--json"]);
    assert_eq!(v["eta"], "X1⊗[X2,X3] - X2⊗[X1,X3] + X3⊗[X1,X2]");
}

#[test]
fn classify_and_framed_vs_twisted() {
    let v = json(&["classify", "--order", "1", "--labels", "1", "--json"]);
    assert_eq!(v["groups"]["T"], serde_json::json!({"rank": 0, "torsion": [2]}));
    let v = json(&["framed-vs-twisted", "--order", "2", "--labels", "1", "--json"]);
    assert_eq!(v["match"], Value::Bool(true));
}

#[test]
fn exit_codes_and_error_lines() {
    let out = wtcalc(&["milnor", "--braid", "s1", "--strands", "2", "--order", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "not_pure");

    let out = wtcalc(&["groups", "--order", "1", "--labels", "1", "--flavor", "bogus"]);
    assert_eq!(out.status.code(), Some(1));

    let out = wtcalc(&["realize", "--tree", "<(1,1),2>"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "repeated_labels");

    let out = wtcalc(&["groups", "--order", "3", "--labels", "2", "--limit-rows", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "resource_limit");

    let out = Command::new(env!("CARGO_BIN_EXE_wtcalc"))
        .args(["groups", "--order", "6", "--labels", "4"])
        .env("WTCALC_LIMIT_MB", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["classify", "--order", "3", "--labels", "2", "--json"];
    assert_eq!(wtcalc(&args).stdout, wtcalc(&args).stdout);
    let args = ["milnor", "--braid", "[[A(1,4),A(2,4)],A(3,4)]", "--strands", "4", "--order", "2"];
    assert_eq!(wtcalc(&args).stdout, wtcalc(&args).stdout);
}
