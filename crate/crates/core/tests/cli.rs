use std::process::{Command, Output};

fn mdet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mdet"))
        .args(args)
        .env("MDET_GRID_END", "1e6")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

#[test]
fn analyze_normal_text() {
    let o = mdet(&["analyze", "--dist", "normal"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("Theorem 1: APPLIES"));
    assert!(s.contains("grid-end=1e6"), "env override not applied");
    assert!(s.contains("window start"));
}

#[test]
fn analyze_lognormal_json_exits_two() {
    let o = mdet(&["analyze", "--dist", "lognormal:0,1", "--phi", "logpow", "--a", "1", "--alpha", "1", "--nmax", "40", "--report", "json"]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], 1);
    for k in ["input_echo", "phi_certificate", "gammas", "carleman", "theorem_verdicts"] {
        assert!(v.get(k).is_some(), "missing {k}");
    }
    assert!(v["proof_checks"].is_null());
    assert_eq!(v["conclusion"], "no sufficient condition certified");
    assert_eq!(v["carleman"][0]["diagnosis"], "CONVERGENT");
}

#[test]
fn json_is_byte_identical() {
    let args = ["analyze", "--dist", "gamma:2,1", "--report", "json"];
    assert_eq!(mdet(&args).stdout, mdet(&args).stdout);
}

#[test]
fn expression_density() {
    let o = mdet(&["analyze", "--density-expr", "exp(-x^2/2)", "--support", "R", "--x0", "1", "--normalize"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Theorem 1: APPLIES"));
    let o = mdet(&["analyze", "--density-expr", "x^2*exp(-x)", "--support", "R+", "--normalize", "--gamma", "g3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Theorem 3: APPLIES"));
}

#[test]
fn input_errors_exit_one() {
    let o = mdet(&["analyze", "--density-expr", "exp(-x^2/2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("density-expr"));
    assert_eq!(mdet(&["analyze", "--dist", "cauchy"]).status.code(), Some(1));
    assert_eq!(
        mdet(&["analyze", "--dist", "normal", "--phi", "logpow+loglog", "--alpha", "1"]).status.code(),
        Some(1)
    );
    assert_eq!(mdet(&["analyze", "--dist", "normal", "--gamma", "g4"]).status.code(), Some(1));
    assert_eq!(mdet(&["analyze", "--dist", "normal", "--phi", "bogus"]).status.code(), Some(1));
    assert_eq!(mdet(&["analyze"]).status.code(), Some(1));
    assert_eq!(mdet(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_proofs_table() {
    let o = mdet(&["verify-proofs", "--dist", "exponential:1", "--phi", "logpow", "--nmax", "30"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("PASS"));
    assert!(!s.contains("FAIL "));
    assert!(s.contains("all checks passed"));
}

#[test]
fn catalog_and_selftest() {
    let o = mdet(&["catalog", "--report", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 16);
    let o = mdet(&["selftest"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("FAIL"));
}
