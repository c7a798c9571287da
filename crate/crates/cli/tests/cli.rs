//! End-to-end checks of the binary: exit codes, the JSON surfaces, and the
//! determinism contract (same command and seed, byte-identical outputs).

use std::path::PathBuf;
use std::process::{Command, Output};

fn caplab(args: &[&str], dir: &std::path::Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_caplab"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn tempdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("caplab_cli_{tag}_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn help_exits_zero() {
    let dir = tempdir("help");
    let out = caplab(&["--help"], &dir);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("capacity"));
}

#[test]
fn rules_engine_on_unit_disk() {
    let dir = tempdir("disk");
    std::fs::write(dir.join("disk.json"), r#"{"kind":"disk","center":[0,0],"radius":1}"#).unwrap();
    let out = caplab(&["capacity", "--set", "disk.json", "--engine", "rules"], &dir);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["value"], 1.0);
    assert_eq!(v["kind"], "exact");
}

#[test]
fn malformed_set_file_exits_two_with_location() {
    let dir = tempdir("bad");
    std::fs::write(dir.join("bad.json"), "{\"kind\":\"disk\"").unwrap();
    let out = caplab(&["capacity", "--set", "bad.json", "--engine", "rules"], &dir);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line"), "parse location missing: {err}");
}

#[test]
fn unknown_flag_exits_two() {
    let dir = tempdir("flag");
    let out = caplab(&["capacity", "--no-such-flag"], &dir);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn computation_error_exits_one() {
    let dir = tempdir("comp");
    // Tracing a Julia set outside the main cardioid is a computation error.
    let out = caplab(&["julia", "trace", "--c", "1,0", "--depth", "4"], &dir);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn determinism_same_seed_same_bytes() {
    let dir = tempdir("det");
    for name in ["a.json", "b.json"] {
        let out = caplab(
            &["--seed", "42", "julia", "sample", "--c", "0.2,0", "--n", "200", "--out", name],
            &dir,
        );
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let a = std::fs::read(dir.join("a.json")).unwrap();
    let b = std::fs::read(dir.join("b.json")).unwrap();
    assert_eq!(a, b, "same seed must reproduce byte-identical samples");
}

#[test]
fn manifest_written_next_to_output() {
    let dir = tempdir("manifest");
    let out = caplab(
        &["--seed", "7", "julia", "length", "--c", "0,0", "--depths", "6..8", "--out", "len.csv"],
        &dir,
    );
    assert!(out.status.success());
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("len.csv.manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["tool"], "caplab");
    assert_eq!(manifest["seed"], 7);
    assert_eq!(manifest["outputs"][0], "len.csv");
    let csv = std::fs::read_to_string(dir.join("len.csv")).unwrap();
    assert!(csv.starts_with("depth,n_angles,length"));
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn scan_csv_has_contract_columns() {
    let dir = tempdir("scan");
    let out = caplab(
        &[
            "motion", "scan", "--motion", "boettcher", "--set", "circle", "--lambdas", "0,1/3",
            "--obs", "alpha", "--depth", "6", "--out", "scan.csv",
        ],
        &dir,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.join("scan.csv")).unwrap();
    assert!(csv.starts_with("lambda_re,lambda_im,observable,value,kind,notes"));
    // alpha jumps from 0 at lambda = 0 to 1 at lambda = 1/3.
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[1].starts_with("0,0,alpha_rules,0"));
    assert!(lines[2].contains("alpha_rules,1"));
}

#[test]
fn props_suite_runs_and_reports() {
    let dir = tempdir("props");
    let out = caplab(&["props", "--suite", "curvature"], &dir);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("PASS"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn grid_roundtrip_through_binary_format() {
    let dir = tempdir("grid");
    // Build a partition bump, then dbar it through the binary interface.
    let out = caplab(
        &["transforms", "pou", "--geometry=-1,-1,0.0625,33,33", "--cell", "1.0", "--out", "bump"],
        &dir,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.join("bump_000.grid").exists());
    let out = caplab(
        &["transforms", "dbar", "--grid", "bump_000.grid", "--out", "dbump.grid"],
        &dir,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.join("dbump.grid").exists());
    assert!(dir.join("dbump.grid.json").exists());
}
