use std::path::Path;
use std::process::{Command, Output};

const DP_AGE: &str = r#"{"kind":"demographic_parity","attribute":"age"}"#;

fn fairnav(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fairnav"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn ok(args: &[&str], dir: &Path) -> String {
    let out = fairnav(args, dir);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn fails(args: &[&str], dir: &Path, code: i32) -> String {
    let out = fairnav(args, dir);
    assert_eq!(out.status.code(), Some(code), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.trim_end().lines().count(), 1, "{err}");
    err
}

#[test]
fn gen_plan_audit_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&["gen-city", "--preset", "biased-age", "--size", "12", "12", "--seed", "1", "--out", "city.json"], d);
    let table = ok(&["plan", "--city", "city.json", "--spec", DP_AGE, "--budget", "20", "--seed", "1", "--out", "front.json"], d);
    assert!(table.contains("efficiency"));
    let audit = ok(&["audit", "--city", "city.json", "--front", "front.json", "--solution", "0"], d);
    assert!(audit.contains("young") && audit.contains("old") && audit.contains("city share"));
}

#[test]
fn spec_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("spec.json"), r#"{"kind":"affirmative_action","attribute":"age","target":[0.5,0.5]}"#).unwrap();
    ok(&["gen-city", "--preset", "uniform", "--size", "6", "6", "--out", "city.json"], d);
    ok(&["plan", "--city", "city.json", "--spec", "@spec.json", "--budget", "8", "--out", "front.json"], d);
}

#[test]
fn zero_budget_plans_base_only() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&["gen-city", "--preset", "uniform", "--size", "6", "6", "--out", "city.json"], d);
    ok(&["plan", "--city", "city.json", "--spec", DP_AGE, "--budget", "0", "--out", "front.json"], d);
    let front: serde_json::Value = serde_json::from_slice(&std::fs::read(d.join("front.json")).unwrap()).unwrap();
    assert_eq!(front["solutions"].as_array().unwrap().len(), 1);
    assert_eq!(front["solutions"][0]["path"], serde_json::json!([[3, 3]]));
}

#[test]
fn oracle_guard_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&["gen-city", "--preset", "biased-age", "--size", "16", "16", "--out", "city.json"], d);
    let err = fails(&["oracle", "--city", "city.json", "--budget", "8", "--out", "o.json"], d, 2);
    assert!(err.contains("5x5") && err.contains("12"), "{err}");
}

#[test]
fn compare_self_and_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&["gen-city", "--preset", "biased-age", "--size", "5", "5", "--out", "city.json"], d);
    ok(&["oracle", "--city", "city.json", "--budget", "8", "--out", "oracle.json"], d);
    let report = ok(&["compare", "--city", "city.json", "--front", "oracle.json", "--front", "oracle.json"], d);
    assert!(report.contains("ratio (first / second): 1.000000"), "{report}");
    assert!(report.contains("first not weakly dominated by second: 0"));

    ok(&["plan", "--city", "city.json", "--spec", DP_AGE, "--budget", "8", "--out", "evo.json"], d);
    let report = ok(&["compare", "--city", "city.json", "--front", "evo.json", "--front", "oracle.json"], d);
    assert!(report.contains("first not weakly dominated by second: 0"), "{report}");
}

#[test]
fn surrogate_writes_solution_file() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&["gen-city", "--preset", "biased-age", "--size", "10", "10", "--out", "city.json"], d);
    ok(&["surrogate", "--city", "city.json", "--spec", DP_AGE, "--budget", "16", "--weight", "1", "--out", "s.json"], d);
    let sol: serde_json::Value = serde_json::from_slice(&std::fs::read(d.join("s.json")).unwrap()).unwrap();
    assert_eq!(sol["format"], "fairnav-solution/1");
    ok(&["audit", "--city", "city.json", "--front", "s.json", "--solution", "0"], d);
}

#[test]
fn error_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&["gen-city", "--preset", "uniform", "--size", "6", "6", "--out", "city.json"], d);
    fails(&["plan", "--city", "missing.json", "--spec", DP_AGE, "--budget", "4", "--out", "f.json"], d, 1);
    fails(&["plan", "--city", "city.json", "--spec", "{", "--budget", "4", "--out", "f.json"], d, 1);
    let err = fails(
        &["plan", "--city", "city.json", "--spec", r#"{"kind":"demographic_parity","attribute":"income"}"#, "--budget", "4", "--out", "f.json"],
        d,
        1,
    );
    assert!(err.contains("income"));
    fails(&["gen-city", "--preset", "nope", "--size", "6", "6", "--out", "x.json"], d, 1);
    fails(&["surrogate", "--city", "city.json", "--spec", r#"{"kind":"rawlsian_groups","attribute":"age"}"#, "--budget", "4", "--weight", "1", "--out", "s.json"], d, 1);
    std::fs::write(d.join("broken.json"), "{\"format\":\"fairnav-city/1\"}").unwrap();
    fails(&["audit", "--city", "broken.json", "--front", "x.json", "--solution", "0"], d, 1);
}
