//! End-to-end tests of the `bethe` binary: pinned values, JSON shapes,
//! report determinism, and error handling.

use std::process::{Command, Output};

fn bethe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bethe"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn hc_base_case_matches_the_pinned_value() {
    let out = bethe(&["hc", "--N", "1", "--x", r#"[["3"]]"#, "--t", r#"[["1"]]"#, "--c", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out).trim(), r#"{"Z":"-1/2"}"#);
}

#[test]
fn graded_flag_switches_the_rank_one_value() {
    let out = bethe(&["hc", "--graded", "1,1", "--x", r#"[["3"]]"#, "--t", r#"[["1"]]"#, "--c", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out).trim(), r#"{"Z":"1/2"}"#);
}

#[test]
fn hc_selectors_agree_on_a_nested_index() {
    let x = r#"[["4"],["-7"]]"#;
    let t = r#"[["1/3"],["9"]]"#;
    let mut values = Vec::new();
    for sel in ["first-level", "last-level", "shifted-first", "shifted-last"] {
        let out = bethe(&["hc", "--N", "2", "--x", x, "--t", t, "--c", "2", "--selector", sel]);
        assert!(out.status.success(), "{sel}");
        values.push(stdout_of(&out).trim().to_string());
    }
    assert!(values.iter().all(|v| v == &values[0]), "{values:?}");
}

#[test]
fn izergin_empty_sets_normalize_to_one() {
    let out = bethe(&["izergin", "--y", "[]", "--x", "[]"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out).trim(), r#"{"K":"1"}"#);
}

#[test]
fn izergin_single_pair_is_the_g_kernel() {
    let out = bethe(&["izergin", "--y", r#"["1"]"#, "--x", r#"["3"]"#, "--c", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out).trim(), r#"{"K":"-1/2"}"#);
}

#[test]
fn action_on_the_vacuum_creates_one_term() {
    let out = bethe(&["action", "--i", "1", "--j", "2", "--z", r#"["5"]"#, "--t", "[[]]", "--c", "2"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(stdout_of(&out).trim()).unwrap();
    let terms = value["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["index"]["levels"], serde_json::json!([["5"]]));
    assert!(terms[0]["coeff"].is_string());
}

#[test]
fn sumformula_is_symmetric_in_its_indices() {
    let a = bethe(&["sumformula", "--x", r#"[["1/2"]]"#, "--t", r#"[["7"]]"#, "--c", "2", "--seed", "3"]);
    let b = bethe(&["sumformula", "--x", r#"[["7"]]"#, "--t", r#"[["1/2"]]"#, "--c", "2", "--seed", "3"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(stdout_of(&a), stdout_of(&b));
}

#[test]
fn verify_reports_are_byte_identical_for_equal_seeds() {
    let args = ["verify", "--suite", "izergin", "--seed", "11", "--c", "3/2"];
    let a = bethe(&args);
    let b = bethe(&args);
    assert!(a.status.success());
    assert_eq!(stdout_of(&a), stdout_of(&b));
    let report: serde_json::Value = serde_json::from_str(stdout_of(&a).trim()).unwrap();
    assert_eq!(report["ok"], serde_json::json!(true));
    assert_eq!(report["seed"], serde_json::json!(11));
    assert_eq!(report["suites"][0]["suite"], serde_json::json!("izergin"));
}

#[test]
fn verify_all_lists_every_suite_and_passes() {
    let out = bethe(&["verify", "--suite", "all", "--seed", "2"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(stdout_of(&out).trim()).unwrap();
    let names: Vec<&str> = report["suites"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["suite"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["kernels", "izergin", "action", "graded", "scalar", "chain"]);
    assert_eq!(report["failed"], serde_json::json!(0));
}

#[test]
fn chain_oracle_passes_on_a_mixed_parity_chain() {
    let out = bethe(&["chain-oracle", "--algebra", "1,1", "--sites", "2", "--seed", "4"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(stdout_of(&out).trim()).unwrap();
    assert_eq!(report["ok"], serde_json::json!(true));
    assert_eq!(report["dim"], serde_json::json!(4));
    assert!(report["checks"].as_array().unwrap().len() >= 4);
}

#[test]
fn chain_oracle_accepts_explicit_parameters() {
    let out = bethe(&[
        "chain-oracle",
        "--algebra",
        "2,0",
        "--sites",
        "1",
        "--xi",
        r#"["0"]"#,
        "--kappa",
        r#"["1","1"]"#,
        "--c",
        "1",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(stdout_of(&out).trim()).unwrap();
    assert_eq!(report["ok"], serde_json::json!(true));
}

#[test]
fn json_indent_pretty_prints() {
    let out = bethe(&["izergin", "--y", "[]", "--x", "[]", "--json-indent", "2"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.starts_with("{\n  \"K\""), "{text}");
}

#[test]
fn malformed_input_fails_cleanly() {
    let out = bethe(&["hc", "--N", "1", "--x", "not json", "--t", r#"[["1"]]"#]);
    assert!(!out.status.success());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("error"), "{err}");
}

#[test]
fn repeated_values_are_rejected() {
    let out = bethe(&["izergin", "--y", r#"["1"]"#, "--x", r#"["1"]"#]);
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("pole"), "{err}");
}

#[test]
fn unknown_suite_is_an_error() {
    let out = bethe(&["verify", "--suite", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn zero_constant_is_rejected() {
    let out = bethe(&["izergin", "--y", "[]", "--x", "[]", "--c", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("nonzero"), "{err}");
}
