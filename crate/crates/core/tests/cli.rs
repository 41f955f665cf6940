use std::process::Command;

use nodevar::gring::MotiveExpr;
use serde_json::Value;

fn nodevar(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_nodevar"))
        .args(args)
        .env("NODEVAR_GROUP_CACHE", std::env::temp_dir().join("nodevar-cli-tests"))
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn schema() -> jsonschema::JSONSchema {
    let raw = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/schema/output.schema.json")).unwrap();
    jsonschema::JSONSchema::compile(&serde_json::from_str(&raw).unwrap()).unwrap()
}

fn json_output(args: &[&str], want_code: i32) -> Value {
    let (code, out, err) = nodevar(args);
    assert_eq!(code, want_code, "{args:?}: {err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    let s = schema();
    if let Err(errs) = s.validate(&v) {
        let msgs: Vec<String> = errs.map(|e| format!("{e} at {}", e.instance_path)).collect();
        panic!("{args:?} violates schema: {msgs:?}");
    }
    v
}

#[test]
fn compute_smooth_genus_one() {
    let (code, out, _) = nodevar(&["compute", "--variety", "rep", "--surface", "g=1", "--format", "plain"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "q^4 + 4*q^3 - q^2 - 4*q");
}

#[test]
fn compute_eval_and_latex() {
    let (code, out, _) = nodevar(&["compute", "--surface", "g=1", "--eval", "3,5"]);
    assert_eq!(code, 0);
    assert!(out.contains("q=3: 168") && out.contains("q=5: 1080"), "{out}");
    let (_, tex, _) = nodevar(&["compute", "--variety", "char", "--surface", "g=1", "--parabolic", "t=1", "--format", "latex"]);
    assert!(tex.contains("\\frac{"), "{tex}");
}

#[test]
fn json_result_round_trips() {
    let v = json_output(&["compute", "--surface", "g=2;branches=3", "--format", "json", "--eval", "7"], 0);
    let e: MotiveExpr = serde_json::from_value(v["result"].clone()).unwrap();
    assert_eq!(serde_json::to_value(&e).unwrap(), v["result"]);
    assert_eq!(v["evaluations"]["7"], e.eval_at_i64(7).unwrap().to_string());
}

#[test]
fn char_both_routes_json() {
    let v = json_output(
        &["compute", "--variety", "char", "--surface", "g=1;branches=2", "--route", "both", "--format", "json"],
        0,
    );
    let cv = &v["cross_validation"];
    assert_eq!(cv["case"], "nopar");
    assert!(cv["agrees"].is_boolean());
    let v = json_output(&["compute", "--variety", "char", "--surface", "g=1", "--format", "json"], 0);
    assert_eq!(v["cross_validation"]["agrees"], true);
    let v = json_output(
        &["compute", "--variety", "char", "--surface", "g=1", "--parabolic", "t=1", "--format", "json"],
        0,
    );
    assert!(v["cross_validation"]["assembled"].is_null());
}

#[test]
fn compute_strata_json() {
    let v = json_output(&["compute", "--surface", "g=1", "--parabolic", "j+=2", "--strata", "--format", "json"], 0);
    assert!(v["strata"]["rho"].is_object());
}

#[test]
fn genus_zero_is_domain_error() {
    let (code, out, err) = nodevar(&["compute", "--variety", "rep", "--surface", "g=0"]);
    assert_eq!(code, 3);
    assert!(out.is_empty());
    assert!(err.contains("--surface") && err.contains("g >= 1"), "{err}");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["compute", "--surface", "g=x"][..],
        &["compute", "--surface", "g=1", "--parabolic", "q=3"],
        &["compute"],
        &["verify", "--surface", "g=1", "--primes", "three"],
        &["tables", "--g-range", "2..1"],
    ] {
        let (code, _, err) = nodevar(args);
        assert_eq!(code, 2, "{args:?}: {err}");
    }
    let (_, _, err) = nodevar(&["compute", "--surface", "g=1", "--parabolic", "q=3"]);
    assert!(err.contains("--parabolic"), "{err}");
}

#[test]
fn verify_smooth_matches() {
    let (code, out, _) = nodevar(&["verify", "--surface", "g=1", "--primes", "3,5,7"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("3 matched, 0 mismatched"));
    json_output(&["verify", "--surface", "g=1", "--primes", "3,5,7", "--format", "json"], 0);
}

#[test]
fn verify_jordan_zero_count() {
    let v = json_output(&["verify", "--surface", "g=1", "--parabolic", "j+=1", "--primes", "3", "--format", "json"], 0);
    assert_eq!(v["verification"][0]["actual"], "0");
    assert_eq!(v["verification"][0]["expected"], "0");
}

#[test]
fn verify_all_skipped_is_domain_error() {
    let (code, out, _) = nodevar(&["verify", "--surface", "g=1", "--parabolic", "ss=2", "--primes", "3"]);
    assert_eq!(code, 3);
    assert!(out.contains("skipped"));
}

#[test]
fn verify_mismatch_exits_four() {
    let v = json_output(
        &["verify", "--surface", "g=1", "--parabolic", "t=1", "--primes", "3", "--format", "json"],
        4,
    );
    assert_eq!(v["verification"][0]["status"], "mismatch");
}

#[test]
fn verify_with_strata() {
    let v = json_output(
        &["verify", "--surface", "g=1", "--primes", "3", "--strata", "--format", "json"],
        0,
    );
    assert_eq!(v["strata_verification"].as_array().unwrap().len(), 5);
    let (code, out, _) = nodevar(&["verify", "--surface", "g=1", "--primes", "5", "--strata", "--cap", "10"]);
    assert_eq!(code, 0);
    assert!(out.contains("above the cap"), "{out}");
}

#[test]
fn tables_shapes() {
    let (code, out, _) = nodevar(&["tables", "--g-range", "1..2", "--b-range", "1..2"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 4);
    let v = json_output(
        &["tables", "--g-range", "1..2", "--b-range", "1..3", "--r-range", "0..1", "--s-range", "0..2", "--format", "json"],
        0,
    );
    assert_eq!(v["cells"].as_array().unwrap().len(), 2 * 3 * 2 * 3);
    let (_, tex, _) = nodevar(&["tables", "--r-range", "0..1", "--s-range", "0..1", "--format", "latex"]);
    assert!(tex.starts_with("\\begin{tabular}") && tex.trim_end().ends_with("\\end{tabular}"));
    let mut depth = 0i32;
    for c in tex.chars() {
        depth += match c {
            '{' => 1,
            '}' => -1,
            _ => 0,
        };
        assert!(depth >= 0);
        assert!(!c.is_control() || c == '\n');
    }
    assert_eq!(depth, 0);
}

#[test]
fn output_is_deterministic() {
    let args = ["compute", "--variety", "char", "--surface", "g=2;branches=2", "--parabolic", "ss=2,3", "--format", "json"];
    let a = nodevar(&args);
    let b = nodevar(&args);
    assert_eq!(a.1, b.1);
    let (_, out, err) = nodevar(&["compute", "--surface", "g=1", "--meta"]);
    assert_eq!(out.trim(), "q^4 + 4*q^3 - q^2 - 4*q");
    assert!(err.contains("generated_at_unix="));
}
