use std::process::{Command, Output};

use serde_json::Value;

fn superint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superint"))
        .args(args)
        .env_remove("WORKBENCH_MAX_LEVEL")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str, contents: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("superint-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn counts_order_five() {
    let v = json_of(&superint(&["counts", "--order", "5"]));
    assert_eq!(v["schema"], "1");
    assert_eq!(v["command"], "counts");
    assert_eq!(v["result"]["equations"], 16);
    assert_eq!(v["result"]["unknowns"], 12);
}

#[test]
fn classify_family_one_order_three() {
    let v = json_of(&superint(&["classify", "--order", "3", "--family", "I"]));
    assert_eq!(v["result"]["class"], "doubly-exotic");
}

#[test]
fn classify_explicit_amap() {
    let v = json_of(&superint(&[
        "classify",
        "--order",
        "3",
        "--amap",
        "A_3_0_0=1, A_0_3_0=cgamma",
    ]));
    assert_eq!(v["result"]["class"], "standard");
}

#[test]
fn painleve_catalog_entry() {
    let v = json_of(&superint(&["painleve", "--catalog", "N6-II"]));
    let r = &v["result"];
    assert_eq!(r["verdict"], "pass-with-constraints");
    assert_eq!(
        r["branches"][0]["resonances"]["integers"],
        serde_json::json!([-1, 1, 6])
    );
    assert_eq!(r["matches_expected"], true);
    assert!(!v["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn painleve_from_file() {
    let p = scratch("p1.ode", "indep z\ndep F order 2\neq F'' = 6*F^2 + z\n");
    let v = json_of(&superint(&["painleve", "--in", p.to_str().unwrap()]));
    assert_eq!(v["result"]["verdict"], "pass");
}

#[test]
fn classical_limit_is_not_a_pass() {
    let v = json_of(&superint(&[
        "painleve",
        "--catalog",
        "N5-I",
        "--set",
        "hbar=0",
    ]));
    assert_eq!(v["result"]["verdict"], "fail");
}

#[test]
fn nlcc_emits_the_catalog_mapping() {
    let v = json_of(&superint(&["nlcc", "--order", "5", "--family", "II"]));
    let m = &v["result"]["catalog_match"];
    assert_eq!(m["id"], "N5-II");
    assert_eq!(m["report"]["matched"], true);
    assert!(!m["report"]["mapping"].as_array().unwrap().is_empty());
}

#[test]
fn verify_reports_the_scaling_relation() {
    let v = json_of(&superint(&["verify", "--catalog", "N3-I"]));
    assert_eq!(
        v["result"]["levels"][1]["status"],
        "vanishes-under-constraints"
    );
    assert!(!v["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn max_level_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_superint"))
        .args(["deteq", "--order", "5", "--family", "I"])
        .env("WORKBENCH_MAX_LEVEL", "1")
        .output()
        .unwrap();
    let v = json_of(&out);
    assert_eq!(v["result"]["levels"].as_array().unwrap().len(), 2);
}

#[test]
fn reports_are_byte_stable() {
    let a = superint(&["painleve", "--catalog", "N5-I"]);
    let b = superint(&["painleve", "--catalog", "N5-I"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn pretty_and_text_output() {
    let out = superint(&[
        "painleve",
        "--catalog",
        "N5-I",
        "--pretty",
        "--format",
        "text",
    ]);
    assert!(out.status.success());
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("verdict: pass"));
    assert!(s.contains('ħ'));
}

#[test]
fn out_file() {
    let p = scratch("counts.json", "");
    let out = superint(&["counts", "--order", "3", "--out", p.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(v["result"]["equations"], 9);
}

#[test]
fn catalog_run_subset_passes() {
    let v = json_of(&superint(&[
        "catalog-run",
        "--catalog",
        "N3-I",
        "--catalog",
        "N5-I",
    ]));
    assert_eq!(v["result"]["mismatches"], serde_json::json!([]));
}

#[test]
fn catalog_run_exit_status_tracks_mismatches() {
    let out = superint(&["catalog-run"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let mismatches = v["result"]["mismatches"].as_array().unwrap();
    assert_eq!(
        out.status.code(),
        Some(if mismatches.is_empty() { 0 } else { 1 })
    );
    assert_eq!(v["result"]["entries"].as_array().unwrap().len(), 10);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(superint(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        superint(&["painleve", "--catalog", "N4-X"]).status.code(),
        Some(2)
    );
    assert_eq!(
        superint(&["painleve", "--in", "/nonexistent/file.ode"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        superint(&["nlcc", "--order", "5", "--family", "II", "--level", "7"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn syntax_errors_carry_positions() {
    let p = scratch("bad.ode", "indep z\ndep F order 1\n\neq F' - (F = 0\n");
    let out = superint(&["painleve", "--in", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 4"), "{err}");
}
