use serde_json::Value;
use std::io::Write;
use std::process::{Command, Output};

fn fqg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fqg")).args(args).output().expect("fqg runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().expect("temp file");
    f.write_all(contents.as_bytes()).expect("write");
    f
}

#[test]
fn verify_builtin_passes() {
    let out = fqg(&["verify", "--builtin", "c:Z4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "fqg/1");
    assert_eq!(v["command"], "verify");
    assert_eq!(v["pass"], true);
}

#[test]
fn unknown_builtin_is_an_input_error() {
    let out = fqg(&["verify", "--builtin", "c:Z7"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["kind"], "input");
}

#[test]
fn malformed_file_is_an_input_error() {
    let f = file("{\"kind\": \"function_algebra\", \"table\": [[0, 1], [1]]}");
    let out = fqg(&["verify", "--input", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let broken = file("{ not json");
    assert_eq!(fqg(&["verify", "--input", broken.path().to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(fqg(&["verify", "--input", "/nonexistent/presentation.json"]).status.code(), Some(2));
}

#[test]
fn group_table_file_verifies() {
    let f = file("{\"kind\": \"group_algebra\", \"table\": [[0, 1, 2], [1, 2, 0], [2, 0, 1]]}");
    let out = fqg(&["verify", "--input", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn nonpositive_tolerance_is_rejected() {
    assert_eq!(fqg(&["verify", "--builtin", "c:Z2", "--tol", "0"]).status.code(), Some(2));
}

#[test]
fn idempotents_of_z4() {
    let out = fqg(&["idempotents", "--builtin", "c:Z4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["count"], 3);
}

#[test]
fn divisible_check_separates_the_sign_criterion() {
    let bad = file("[0.3, 0.7]");
    let out = fqg(&["divisible-check", "--builtin", "c:Z2", "--state", bad.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], false);

    let good = file("[0.8, 0.2]");
    let out = fqg(&["divisible-check", "--builtin", "c:Z2", "--state", good.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn poisson_decompose_reports_a_rate() {
    let out = fqg(&["poisson-decompose", "--builtin", "c:S3", "--idempotent-index", "1", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("rate"));
}

#[test]
fn table_output_ends_with_verdict() {
    let out = fqg(&["irreps", "--builtin", "g:S3", "--output", "table"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().last(), Some("PASS"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        &["suite", "--builtin", "c:Z3", "--samples", "3", "--seed", "11"][..],
        &["poisson-decompose", "--builtin", "g:Z2xZ2", "--idempotent-index", "2", "--seed", "4"][..],
        &["hypergroup", "--builtin", "c:S3", "--idempotent-index", "1"][..],
    ] {
        let a = fqg(args);
        let b = fqg(args);
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}
