//! End-to-end tests of the `bakerlab` binary: flags, file outputs, and the
//! exit-code contract (0 = success/PASS, 1 = verdict FAIL, 2 = usage error).

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bakerlab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bakerlab"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bakerlab()
        .args(args)
        .env("BAKERLAB_OUT_DIR", dir)
        .output()
        .expect("binary runs")
}

fn tmpdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bakerlab-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn scan_explicit_invariant_point() {
    let dir = tmpdir("scan-inv");
    let out = run(
        &["scan", "--n", "4", "--theta-denom", "0", "--theta", "0,0", "--format", "json", "--out", "point.jsonl"],
        &dir,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.join("point.jsonl")).unwrap();
    let mut lines = text.lines();
    let mut invariant_records = 0;
    for line in lines.by_ref().take(4) {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["schema"], "bakerlab/1");
        assert_eq!(v["n"], 4);
        if v["invariant"] == true {
            invariant_records += 1;
        }
    }
    assert_eq!(invariant_records, 4);
    let verdict: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(verdict["pass"], true);
}

#[test]
fn scan_antiperiodic_point_fails_verdict_cleanly() {
    // θ=(1/2,1/2) alone: not invariant anywhere, so the verdict over the
    // scanned set is PASS (empty invariant set matches the expectation for a
    // grid without (0,0))
    let dir = tmpdir("scan-anti");
    let out = run(
        &["scan", "--n", "4", "--theta-denom", "0", "--theta", "1/2,1/2", "--format", "csv", "--out", "anti.csv"],
        &dir,
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.join("anti.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "n,theta1,theta2,max_rx,max_ry,invariant");
    let row = lines.next().unwrap();
    assert!(row.starts_with("4,1/2,1/2,"));
    assert!(row.ends_with("false"));
}

#[test]
fn scan_full_grid_small() {
    let dir = tmpdir("scan-grid");
    let out = run(
        &["scan", "--n", "1..4", "--theta-denom", "2", "--tol", "1e-8"],
        &dir,
    );
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("verdict: PASS"));
    assert!(stdout.contains("invariant: N=2 θ=(0/1,0/1)"));
    assert!(stdout.contains("invariant: N=4 θ=(0/1,0/1)"));
    assert!(dir.join("scan.jsonl").exists());
}

#[test]
fn scan_rejects_bad_rational() {
    let dir = tmpdir("scan-bad");
    let out = run(&["scan", "--theta", "0.5,0.5", "--theta-denom", "0"], &dir);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn matrix_writes_files_and_checks() {
    let dir = tmpdir("matrix");
    let out = run(&["matrix", "--n", "2", "--check"], &dir);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.join("matrix_2.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 2);
    // 2^{-1/2}·[[1,1],[i,−i]]: first cell is "0.7071...,0"
    assert!(rows[0].starts_with("\"0.7071067811865475"));
    assert!(dir.join("eigenphases_2.csv").exists());
    assert!(dir.join("matrix_2.json").exists());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("unitarity deviation"));
    assert!(stdout.contains("matrix vs comb"));
}

#[test]
fn matrix_odd_n_is_a_usage_error() {
    let dir = tmpdir("matrix-odd");
    let out = run(&["matrix", "--n", "3"], &dir);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("N must be even"));
}

#[test]
fn classical_orbit_csv() {
    let dir = tmpdir("orbit");
    let out = run(&["classical", "--orbit", "1/4,1/2", "--steps", "5"], &dir);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "step,x,p,region_x,region_p");
    assert_eq!(lines.len(), 6, "header plus one row per step");
    // first image of (1/4, 1/2) is (1/2, 1/4)
    assert!(lines[1].starts_with("1,0.5,0.25,"));
}

#[test]
fn classical_escape_json() {
    let dir = tmpdir("escape");
    let out = run(
        &["classical", "--escape", "--n", "2", "--theta2", "1/2", "--out", "escape.json"],
        &dir,
    );
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("escape.json")).unwrap()).unwrap();
    assert_eq!(v["schema"], "bakerlab/1");
    assert!(v["n0_fraction"].as_f64().unwrap() > 0.0);

    let out = run(&["classical", "--escape", "--n", "2", "--theta2", "0"], &dir);
    assert!(String::from_utf8_lossy(&out.stdout).contains("escape fraction (n=0 family): 0"));
}
