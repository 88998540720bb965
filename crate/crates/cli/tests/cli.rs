use std::process::Command;

use serde_json::Value;

fn freealg(args: &[&str]) -> (bool, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_freealg")).args(args).output().expect("binary runs");
    let text = String::from_utf8(out.stdout).unwrap();
    let v: Value = serde_json::from_str(text.trim()).unwrap_or_else(|e| panic!("{e}: {text}"));
    assert_eq!(v["v"], 1);
    assert_eq!(v["ok"].as_bool().unwrap(), out.status.success());
    (out.status.success(), v)
}

fn code(v: &Value) -> &str {
    v["error"]["code"].as_str().unwrap()
}

#[test]
fn poly_arithmetic() {
    let (ok, v) = freealg(&["poly", "mul", "x1+1", "x1-1"]);
    assert!(ok);
    assert_eq!(v["result"]["poly"], "x1^2 - 1");
    let (_, v) = freealg(&["poly", "sub", "x1*x2", "x2*x1"]);
    assert_eq!(v["result"]["poly"], "-x2*x1 + x1*x2");
    let (_, v) = freealg(&["--field", "fp:3", "poly", "pow", "x1+1", "3"]);
    assert_eq!(v["result"]["poly"], "x1^3 + 1");
}

#[test]
fn term_maps_round_trip() {
    let (_, v) = freealg(&["--json", "poly", "show", "2*x1*x2 + 3"]);
    let terms = v["result"]["poly"].to_string();
    let (_, w) = freealg(&["poly", "show", &terms]);
    assert_eq!(w["result"]["poly"], "2*x1*x2 + 3");
}

#[test]
fn errors_have_codes() {
    let (ok, v) = freealg(&["poly", "show", "x3"]);
    assert!(!ok);
    assert_eq!(code(&v), "BadGenerator");
    let (ok, v) = freealg(&["poly", "frobnicate", "x1"]);
    assert!(!ok);
    assert_eq!(code(&v), "Usage");
    let (ok, v) = freealg(&["--field", "fp:4", "poly", "show", "x1"]);
    assert!(!ok);
    assert_eq!(code(&v), "NotPrime");
}

#[test]
fn encode_then_decode() {
    let (_, v) = freealg(&["encode", "x1*x2 - 3*x2"]);
    let pair = v["result"]["pair"].to_string();
    let (ok, w) = freealg(&["decode", &pair]);
    assert!(ok);
    assert_eq!(w["result"]["poly"], "x1*x2 - 3*x2");
}

#[test]
fn big_powers_round_trip_and_tampering() {
    let (_, v) = freealg(&["--json", "bigpowers", "encode", "x1", "x2 + 1", "x1*x2"]);
    let m = v["result"]["marker"].as_u64().unwrap().to_string();
    let enc = v["result"]["poly"].to_string();
    let (ok, w) = freealg(&["bigpowers", "decode", "--marker", &m, &enc]);
    assert!(ok);
    assert_eq!(w["result"]["factors"], serde_json::json!(["x1", "x2 + 1", "x1*x2"]));

    let (ok, v) = freealg(&["bigpowers", "encode", "--e", "2", "x1", "x2"]);
    assert!(!ok);
    assert_eq!(code(&v), "BadExponent");

    let (_, v) = freealg(&["bigpowers", "sync", "--s", "1", "x1", "x2"]);
    let m = v["result"]["marker"].as_u64().unwrap() as usize;
    let enc = v["result"]["poly"].as_str().unwrap().to_string();
    let (ok, w) = freealg(&["bigpowers", "sync", "x1", "x2", "--read", &enc, "--marker", &m.to_string()]);
    assert!(ok, "{w}");
    assert_eq!(w["result"]["s"], 1);
    // one extra marker at the end
    let a: Vec<String> = (1..=m).map(|j| format!("x1*x2^{j}")).collect();
    let tampered = format!("({enc})*{}", a.join("*"));
    let (ok, w) = freealg(&["bigpowers", "sync", "x1", "x2", "--read", &tampered, "--marker", &m.to_string()]);
    assert!(!ok);
    assert_eq!(code(&w), "InconsistentExponents");
}

#[test]
fn basis_check() {
    let (ok, v) = freealg(&["basis", "check", "x1 + x2^2, x2"]);
    assert!(ok);
    assert_eq!(v["result"]["verdict"], "yes");
    assert_eq!(v["result"]["detail"]["inverse"], serde_json::json!(["-x2^2 + x1", "x2"]));
    let (_, v) = freealg(&["basis", "check", "x1*x2, x2"]);
    assert_eq!(v["result"]["verdict"], "no");
}

#[test]
fn catalog_formulas() {
    let (_, v) = freealg(&["formula", "--formula", "list"]);
    assert!(v["result"].as_array().unwrap().len() >= 10);
    let (ok, v) = freealg(&["--field", "fp:2", "formula", "--formula", "Irr", "--arg", "x=x1*x2 + x1", "--degree", "2"]);
    assert!(ok, "{v}");
    assert_eq!(v["result"]["value"], "false");
    let (_, v) = freealg(&["--field", "fp:2", "formula", "--formula", "Irr", "--arg", "x=x1*x2 + 1", "--degree", "2"]);
    assert_eq!(v["result"]["value"], "true");
}

#[test]
fn interpretations() {
    let (ok, v) = freealg(&["interp", "verify", "z2_in_z4", "(forall (x) (= (+ x x) 0))"]);
    assert!(ok, "{v}");
    assert_eq!(v["result"]["agree"], true);
    assert_eq!(v["result"]["source_value"], "true");
    let (_, v) = freealg(&["interp", "quotient", "z2_in_z4"]);
    assert_eq!(v["result"]["size"], 2);
    let (_, v) = freealg(&["interp", "compose", "z2_in_z4", "z4_in_z8"]);
    assert!(v["result"]["name"].as_str().unwrap().contains('+'));
    let (ok, v) = freealg(&["interp", "verify", "no_such_scheme", "(= 0 0)"]);
    assert!(!ok);
    assert_eq!(code(&v), "Io");
}

#[test]
fn selftest_single_criterion() {
    let (ok, v) = freealg(&["selftest", "--quick", "--only", "1"]);
    assert!(ok, "{v}");
    assert_eq!(v["result"]["passed"], 1);
    let (ok, v) = freealg(&["selftest", "--only", "99"]);
    assert!(!ok);
    assert_eq!(code(&v), "Usage");
}
