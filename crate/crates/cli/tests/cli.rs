use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn symcone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symcone"))
        .args(args)
        .env_remove("SYMCONE_SEED")
        .env_remove("SYMCONE_THREADS")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn spec(dir: &TempDir, factors: &str) -> PathBuf {
    write(dir, "spec.json", &format!(r#"{{"factors":[{factors}]}}"#))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn algebra_info_reports_dim_and_rank() {
    let dir = TempDir::new().unwrap();
    let p = spec(&dir, r#"{"kind":"sym","n":2}"#);
    let out = symcone(&["--format", "text", "algebra", "info", "--spec", s(&p)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("dim 3, rank 2"));

    let p = spec(&dir, r#"{"kind":"hadamard","n":3},{"kind":"spin","n":4}"#);
    let out = symcone(&["--format", "text", "algebra", "info", "--spec", s(&p)]);
    assert!(stdout(&out).contains("dim 7, rank 5"));

    let out = symcone(&["algebra", "info", "--spec", s(&p)]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["dim"], 7);
    assert_eq!(v["identity"], serde_json::json!([1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0]));
}

#[test]
fn bad_specs_exit_two() {
    let dir = TempDir::new().unwrap();
    let p = spec(&dir, "");
    let out = symcone(&["algebra", "info", "--spec", s(&p)]);
    assert_eq!(code(&out), 2);

    let p = write(&dir, "broken.json", r#"{"factors":[{"kind":"sym" "n":2}]}"#);
    let out = symcone(&["algebra", "info", "--spec", s(&p)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1 column"));
}

#[test]
fn witness_on_hadamard_two() {
    let dir = TempDir::new().unwrap();
    let p = spec(&dir, r#"{"kind":"hadamard","n":2}"#);
    let out = symcone(&["witness", "--spec", s(&p)]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["a"], serde_json::json!([[0.0, 1.0], [1.0, 0.0]]));
    assert_eq!(v["status"], "valid");
}

#[test]
fn witness_needs_dimension_two() {
    let dir = TempDir::new().unwrap();
    let p = spec(&dir, r#"{"kind":"hadamard","n":1}"#);
    let out = symcone(&["witness", "--spec", s(&p)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("hypothesis"));
}

#[test]
fn witness_sym_two_with_500_probes_and_recheck() {
    let dir = TempDir::new().unwrap();
    let p = spec(&dir, r#"{"kind":"sym","n":2}"#);
    let cert = dir.path().join("cert.json");
    let out = symcone(&["witness", "--spec", s(&p), "--samples", "500", "--out", s(&cert)]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    let probes = v["probes"].as_array().unwrap();
    assert_eq!(probes.len(), 500);
    assert!(probes.iter().all(|p| p["witness_pairing"].as_f64().unwrap().abs() <= 1e-9));

    assert_eq!(code(&symcone(&["verify", "cert", s(&cert)])), 0);

    let mut v = v;
    v["d"][0] = serde_json::json!(0.5);
    let tampered = write(&dir, "tampered.json", &v.to_string());
    assert_eq!(code(&symcone(&["verify", "cert", s(&tampered)])), 1);
}

#[test]
fn witness_from_idempotent_file() {
    let dir = TempDir::new().unwrap();
    let p = spec(&dir, r#"{"kind":"spin","n":3}"#);
    let c = write(&dir, "c.json", "[0.5, 0.0, 0.5]");
    let out = symcone(&["witness", "--spec", s(&p), "--idempotent", s(&c), "--samples", "50"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["d"], serde_json::json!([0.5, 0.0, -0.5]));

    // not an idempotent
    let c = write(&dir, "c.json", "[1.0, 0.0, 0.5]");
    let out = symcone(&["witness", "--spec", s(&p), "--idempotent", s(&c)]);
    assert_eq!(code(&out), 2);
}

#[test]
fn same_seed_same_bytes() {
    let dir = TempDir::new().unwrap();
    let p = spec(&dir, r#"{"kind":"hadamard","n":2},{"kind":"spin","n":3}"#);
    let a = symcone(&["witness", "--spec", s(&p), "--frame-index", "2", "--samples", "40", "--seed", "9"]);
    let b = symcone(&["witness", "--spec", s(&p), "--frame-index", "2", "--samples", "40", "--seed", "9"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let c = symcone(&["witness", "--spec", s(&p), "--frame-index", "2", "--samples", "40", "--seed", "10"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn cop_check_exit_codes() {
    let dir = TempDir::new().unwrap();
    let lor = write(
        &dir,
        "lor.json",
        r#"{"algebra":{"factors":[{"kind":"spin","n":3}]},"matrix":[[1,0,0],[0,-1,0],[0,0,-1]]}"#,
    );
    let out = symcone(&["cop", "check", "--op", s(&lor)]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["status"], "certified_copositive");
    assert_eq!(v["method"], "exact_spin");

    let neg = write(
        &dir,
        "neg.json",
        r#"{"algebra":{"factors":[{"kind":"hadamard","n":2}]},"matrix":[[1,-2],[-2,1]]}"#,
    );
    let out = symcone(&["cop", "check", "--op", s(&neg)]);
    assert_eq!(code(&out), 1);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["status"], "certified_not_copositive");

    let asym = write(
        &dir,
        "asym.json",
        r#"{"algebra":{"factors":[{"kind":"hadamard","n":2}]},"matrix":[[1,-2],[0,1]]}"#,
    );
    assert_eq!(code(&symcone(&["cop", "check", "--op", s(&asym)])), 2);
}

#[test]
fn cases_commands() {
    let out = symcone(&["cases", "classify", "0", "0", "1", "2"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["case"], 6);
    assert_eq!(v["leading_order"], 1);
    assert_eq!(code(&symcone(&["cases", "classify", "1", "1", "0", "0"])), 2);

    let out = symcone(&["cases", "verify", "--rank", "2"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let counts: Vec<u64> = v["counts"].as_array().unwrap().iter().map(|c| c["count"].as_u64().unwrap()).collect();
    assert_eq!(counts, vec![2, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0]);

    let out = symcone(&["--format", "text", "cases", "verify", "--rank", "4", "--p", "2"]);
    let text = stdout(&out);
    assert!(text.contains("(11)"));
    assert!(text.contains('*'));
    assert!(text.contains("55 quadruples"));
}

#[test]
fn peirce_dimensions_add_up() {
    let dir = TempDir::new().unwrap();
    let p = spec(&dir, r#"{"kind":"sym","n":3}"#);
    let out = symcone(&["peirce", "--spec", s(&p)]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let total: u64 = v["system"]["spaces"].as_array().unwrap().iter().map(|s| s["dim"].as_u64().unwrap()).sum();
    assert_eq!(total, 6);
}

#[test]
fn verify_only_cases() {
    let out = symcone(&["verify", "all", "--only", "cases"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let suites = v["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 1);
    assert_eq!(suites[0]["suite"], "cases");
}

#[test]
fn injected_fault_is_named() {
    let out = symcone(&["--format", "text", "verify", "all", "--quick", "--only", "blocks", "--inject-fault"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("failed: blocks / adjoint_check agreement"));
}

#[test]
fn quick_verify_passes_and_ignores_thread_count() {
    let a = symcone(&["verify", "all", "--quick", "--threads", "1"]);
    let b = symcone(&["verify", "all", "--quick", "--threads", "4"]);
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
}
