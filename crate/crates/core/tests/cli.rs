//! End-to-end tests of the `chern` binary.

use std::process::Command;

use arith_chern::curvature::CurvatureReport;

fn chern(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_chern")).args(args).output().expect("spawn chern");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn curvature_json_is_byte_stable() {
    let args =
        ["curvature", "--kind", "curvature", "--n", "2", "--q", "split-sym", "--p", "3", "--p2", "5", "--order", "3"];
    let (code, a, _) = chern(&args);
    let (_, b, _) = chern(&args);
    assert_eq!(code, 0);
    assert_eq!(a, b);
    let report = CurvatureReport::from_json(&a).unwrap();
    assert_eq!(report.to_json(), a);
}

#[test]
fn every_kind_runs() {
    let cases: [&[&str]; 5] = [
        &["--kind", "curvature", "--n", "2", "--p", "3", "--p2", "5", "--order", "2"],
        &["--kind", "three", "--n", "2", "--p", "3", "--p2", "5", "--p3", "7", "--order", "1"],
        &["--kind", "mixed", "--n", "2", "--p", "3", "--order", "2"],
        &["--kind", "so", "--n", "2", "--p", "3", "--p2", "5", "--order", "3"],
        &["--kind", "unitary", "--n", "2", "--p", "3", "--p2", "5", "--order", "3"],
    ];
    for extra in cases {
        let mut args = vec!["curvature"];
        args.extend_from_slice(extra);
        args.extend_from_slice(&["--format", "text"]);
        let (code, out, err) = chern(&args);
        assert_eq!(code, 0, "{args:?}: {err}");
        assert!(out.contains("kind:"), "{out}");
    }
}

#[test]
fn exit_codes() {
    let (code, _, _) = chern(&["--help"]);
    assert_eq!(code, 0);
    let (code, _, _) =
        chern(&["curvature", "--kind", "curvature", "--n", "2", "--p", "4", "--p2", "5", "--order", "2"]);
    assert_eq!(code, 1);
    let (code, _, _) = chern(&["bogus"]);
    assert_eq!(code, 1);
    let (code, _, err) =
        chern(&["curvature", "--kind", "curvature", "--n", "2", "--p", "3", "--p2", "3", "--order", "2"]);
    assert_eq!(code, 1, "{err}");
}

#[test]
fn obstructed_form_exits_two() {
    let path = std::env::temp_dir().join("arith_chern_alt2.json");
    std::fs::write(&path, r#"{"n": 2, "sign": -1, "entries": [["0", "2"], ["-2", "0"]]}"#).unwrap();
    let q = format!("file:{}", path.display());
    let (code, _, err) =
        chern(&["curvature", "--kind", "curvature", "--n", "2", "--q", &q, "--p", "3", "--p2", "5", "--order", "2"]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn verify_suite_passes_and_lists() {
    let (code, out, _) = chern(&["verify", "--list"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 13);
    let (code, out, _) = chern(&["verify", "--suite", "all", "--primes", "3,5,7", "--json"]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["passed"], true);
    let ids: Vec<&str> = v["targets"].as_array().unwrap().iter().map(|t| t["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}
