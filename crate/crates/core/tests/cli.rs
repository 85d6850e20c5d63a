use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use qshift::qasm::import_text;
use qshift::*;

fn qshift(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qshift")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn build_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("p4.qasm");
    assert!(qshift(&["build", "--variant", "parallel", "-m", "4", "-o", path(&file)]).status.success());
    let out = qshift(&["verify", "--input", path(&file)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("PASS"));
}

#[test]
fn build_rejects_small_parallel() {
    let out = qshift(&["build", "--variant", "parallel", "-m", "3"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("m >= 4 required"));
}

#[test]
fn built_canonical_census_matches_builder() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("c5.qasm");
    assert!(qshift(&["build", "--variant", "canonical", "-m", "5", "-o", path(&file)]).status.success());
    let imported = import_text(&fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(imported.census(), build_canonical(5).unwrap().census());
}

#[test]
fn corrupted_file_fails_verification_with_named_state() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("p4.qasm");
    assert!(qshift(&["build", "--variant", "parallel", "-m", "4", "-o", path(&file)]).status.success());
    let text = fs::read_to_string(&file).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    let first_gate = lines.iter().position(|l| l.starts_with("cx")).unwrap();
    lines.remove(first_gate + 3);
    fs::write(&file, lines.join("\n") + "\n").unwrap();
    let out = qshift(&["verify", "--input", path(&file)]);
    assert_eq!(out.status.code(), Some(4));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("FAIL"), "{err}");
    assert!(err.contains("|k="), "{err}");
}

#[test]
fn verify_qft() {
    let out = qshift(&["verify", "--variant", "qft", "-m", "5", "--tol", "1e-10"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn table_predicted_column() {
    let out = qshift(&["table", "--n-min", "10", "--n-max", "25", "--step", "5", "--variants", "parallel", "--format", "csv"]);
    assert!(out.status.success());
    let predicted: Vec<String> =
        stdout(&out).lines().skip(1).map(|l| l.split(',').nth(2).unwrap().to_string()).collect();
    assert_eq!(predicted, ["209", "284", "359", "434"]);
}

#[test]
fn table_marks_out_of_domain_prediction() {
    let out = qshift(&["table", "--n-min", "5", "--n-max", "10", "--variants", "parallel", "--format", "csv"]);
    let text = stdout(&out);
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[0][2], "NA");
    let measured: Vec<i64> = rows[1..].iter().map(|r| r[3].parse().unwrap()).collect();
    assert!(measured.windows(2).all(|w| w[1] - w[0] == 15), "{measured:?}");
}

#[test]
fn walk_outputs() {
    let out = qshift(&["walk", "-m", "4", "--steps", "0", "--site", "7"]);
    assert_eq!(stdout(&out), "site,probability\n7,1.0\n");

    let out = qshift(&["walk", "-m", "4", "--steps", "8", "--compare"]);
    assert!(out.status.success());
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    let devs: Vec<f64> = err.lines().map(|l| l.rsplit(' ').next().unwrap().parse().unwrap()).collect();
    assert_eq!(devs.len(), 3);
    assert!(devs.iter().all(|&d| d < 1e-10), "{err}");

    let out = qshift(&["walk", "-m", "4", "--steps", "1", "--coin", "pauli"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors() {
    assert_eq!(qshift(&["count"]).status.code(), Some(2));
    assert_eq!(qshift(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(qshift(&["table", "--n-min", "9", "--n-max", "5"]).status.code(), Some(2));
}

#[test]
fn missing_input_is_io_error() {
    assert_eq!(qshift(&["verify", "--input", "/nonexistent/file.qasm"]).status.code(), Some(1));
}

#[test]
fn lower_with_custom_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("p.toml");
    fs::write(&cfg, "[[stage]]\npass = \"lower_mcx\"\n\n[[stage]]\npass = \"cancel_adjacent\"\n").unwrap();
    let out_file = dir.path().join("out.qasm");
    let out = qshift(&["lower", "--variant", "parallel", "-m", "6", "--pipeline", path(&cfg), "-o", path(&out_file)]);
    assert!(out.status.success());
    let lowered = import_text(&fs::read_to_string(&out_file).unwrap()).unwrap();
    assert_eq!(lowered.census().max_mcx_arity(), 2);
    assert_eq!(qshift(&["verify", "--input", path(&out_file)]).status.code(), Some(0));

    fs::write(&cfg, "[[stage]]\npass = \"frobnicate\"\n").unwrap();
    let out = qshift(&["lower", "--variant", "parallel", "-m", "6", "--pipeline", path(&cfg)]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn crossover_line() {
    assert_eq!(stdout(&qshift(&["crossover"])), "crossover n = 12 (parallel 239 < qft 242)\n");
}
