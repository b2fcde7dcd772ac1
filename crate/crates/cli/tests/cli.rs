use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn detpf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_detpf"))
        .args(args)
        .env_remove("DETPF_PRIME")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn help_lists_every_subcommand() {
    let out = detpf(&["--help"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for cmd in [
        "dominance", "dominance-sweep", "lower-bound", "construct", "verify", "hilbert",
        "gorenstein", "smooth", "formulas",
    ] {
        assert!(text.contains(cmd), "missing {cmd}");
    }
}

#[test]
fn formulas_json_and_csv() {
    let v = json(&detpf(&["formulas", "--ambient", "3", "--degree", "3"]));
    assert_eq!(v["result"]["moduli_dim"], 24);
    assert_eq!(v["result"]["linsys_dim"], 19);
    assert_eq!(v["result"]["gorenstein_degree"], 5);
    assert_eq!(v["config"]["prime"], 31991);

    let out = detpf(&["--format", "csv", "formulas", "--ambient", "3", "--degree", "16"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("3,16,960,968,"));
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(detpf(&["--prime", "10", "formulas", "--ambient", "3", "--degree", "3"]).status.code(), Some(2));
    let out = detpf(&["verify", "--matrix", "/nonexistent", "--form", "/nonexistent", "--kind", "det"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    assert_eq!(detpf(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn prime_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_detpf"))
        .args(["formulas", "--ambient", "3", "--degree", "3"])
        .env("DETPF_PRIME", "101")
        .output()
        .unwrap();
    assert_eq!(json(&out)["config"]["prime"], 101);
}

fn strip_timing(mut v: Value) -> Value {
    v["result"]["elapsed_ms"] = Value::Null;
    v
}

#[test]
fn dominance_is_reproducible() {
    let args = ["--seed", "7", "dominance", "--ambient", "3", "--degree", "5"];
    let a = strip_timing(json(&detpf(&args)));
    let b = strip_timing(json(&detpf(&args)));
    assert_eq!(a, b);
    assert_eq!(a["result"]["cd"], 0);
    assert_eq!(a["result"]["verdict"], "Dominant");
}

#[test]
fn expect_dominant_fails_on_obstructed_case() {
    let out = detpf(&["dominance", "--ambient", "5", "--degree", "3", "--expect-dominant"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["cd"], 1);
}

#[test]
fn construct_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = dir.path().join("m.txt");
    let target = dir.path().join("f.txt");
    let out = detpf(&[
        "-o", path(&matrix), "construct", "fermat", "--ambient", "2", "--degree", "5",
        "--target-out", path(&target),
    ]);
    assert!(out.status.success());

    let v = json(&detpf(&["verify", "--matrix", path(&matrix), "--form", path(&target), "--kind", "det"]));
    assert_eq!(v["result"]["ok"], true);

    let v = json(&detpf(&["smooth", "--form", path(&target)]));
    assert_eq!(v["result"]["verdict"], "smooth");

    let v = json(&detpf(&["hilbert", "--matrix", path(&matrix), "--degrees", "0..3"]));
    let js: Vec<u64> = v["result"].as_array().unwrap().iter().map(|r| r["j"].as_u64().unwrap()).collect();
    assert_eq!(js, vec![0, 1, 2, 3]);
}

#[test]
fn verify_rejects_wrong_form() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = dir.path().join("m.txt");
    let quartic = dir.path().join("f4.txt");
    let cubic = dir.path().join("f3.txt");
    assert!(detpf(&["-o", path(&matrix), "construct", "fermat", "--ambient", "2", "--degree", "4", "--target-out", path(&quartic)]).status.success());
    assert!(detpf(&["-o", "/dev/null", "construct", "fermat", "--ambient", "2", "--degree", "3", "--target-out", path(&cubic)]).status.success());
    let out = detpf(&["verify", "--matrix", path(&matrix), "--form", path(&cubic), "--kind", "det"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["ok"], false);
}

#[test]
fn csv_refused_where_unsupported() {
    let dir = tempfile::tempdir().unwrap();
    let form = dir.path().join("f.txt");
    let matrix = dir.path().join("m.txt");
    assert!(detpf(&["-o", path(&matrix), "construct", "fermat", "--ambient", "2", "--degree", "3", "--target-out", path(&form)]).status.success());
    assert_eq!(detpf(&["--format", "csv", "smooth", "--form", path(&form)]).status.code(), Some(2));
}

#[test]
fn text_output_renders_fields() {
    let out = detpf(&["--format", "text", "formulas", "--ambient", "4", "--degree", "6"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("moduli_dim"));
}
