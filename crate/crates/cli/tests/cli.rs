//! End-to-end checks of the `simulate` binary: argument handling, exit
//! codes, artifact emission.

use std::fs;
use std::path::Path;
use std::process::Command;

fn simulate() -> Command {
    Command::new(env!("CARGO_BIN_EXE_simulate"))
}

fn scenario(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

#[test]
fn successful_run_exits_zero_and_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = simulate()
        .arg(scenario("custom_mask.cfg"))
        .arg("--out")
        .arg(dir.path())
        .arg("--seedless")
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("scenario: custom"));
    assert!(dir.path().join("summary.json").exists());
    assert!(dir.path().join("gamma.csv").exists());
    assert!(dir.path().join("gamma.pgm").exists());
    assert!(dir.path().join("gamma.pgm.json").exists());
    assert!(dir.path().join("marginal.csv").exists());
}

#[test]
fn emit_override_limits_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = simulate()
        .arg(scenario("custom_mask.cfg"))
        .arg("--out")
        .arg(dir.path())
        .arg("--emit")
        .arg("json")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("summary.json").exists());
    assert!(!dir.path().join("gamma.csv").exists());
    assert!(!dir.path().join("gamma.pgm").exists());
}

#[test]
fn missing_config_exits_two() {
    let out = simulate().arg("/nonexistent/path.cfg").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_usage_exits_two() {
    let out = simulate().output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("usage"));
    let out = simulate().arg("--bogus").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_errors_exit_two_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "scenario = correlation_map\nwaist = grape\n").unwrap();
    let out = simulate().arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 2"), "stderr: {stderr}");
}

#[test]
fn numeric_failures_exit_three() {
    // validates as a config but the mask table does not match the grid
    let dir = tempfile::tempdir().unwrap();
    let mask = dir.path().join("mask.txt");
    fs::write(&mask, "0.0 0.0\n1.0 0.0\n").unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(
        &cfg,
        format!(
            "scenario = custom\nsamples = 1024\nhalf_extent = 8.0\nsite_range = 5\n\
             mask_file = {}\n",
            mask.display()
        ),
    )
    .unwrap();
    let out = simulate().arg(&cfg).arg("--out").arg(dir.path().join("out")).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}
