//! End-to-end tests of the `bh` binary: output shape, determinism, file
//! output, and exit codes.

use std::process::{Command, Output};

fn bh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bh"))
        .args(args)
        .env_remove("BH_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 output")
}

#[test]
fn constants_table_has_expected_rows_and_values() {
    let out = bh(&["constants", "--family", "recursive-real", "--mode", "gamma", "--max", "16"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "m,c_m,ln_c_m");
    assert_eq!(lines.len(), 1 + 15, "15 rows for m = 2..16");
    // Row m = 2 carries sqrt(2), emitted at 17 significant digits.
    let cells: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(cells[0], "2");
    let c2: f64 = cells[1].parse().unwrap();
    assert!((c2 - std::f64::consts::SQRT_2).abs() <= 1e-14);
    // 17 significant digits means a 16-digit fraction.
    assert_eq!(cells[1].split('e').next().unwrap().len(), 18);
}

#[test]
fn limits_prints_six_rows_with_even_ratio_anchor() {
    let out = bh(&["limits"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 7);
    let even: Vec<&str> = lines.iter().filter(|l| l.starts_with("even-ratio,")).cloned().collect();
    assert_eq!(even.len(), 1);
    assert!(even[0].contains("1.4402"), "got {}", even[0]);
}

#[test]
fn p0_reports_the_anchor_value() {
    let out = bh(&["p0"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row = text.lines().nth(1).unwrap();
    let cells: Vec<&str> = row.split(',').collect();
    let p0: f64 = cells[2].parse().unwrap();
    assert!((p0 - 1.847416336076342).abs() < 1e-12);
    let residual: f64 = cells[3].parse().unwrap();
    assert!(residual.abs() < 1e-12);
}

#[test]
fn verify_littlewood_fixture_passes() {
    let out = bh(&[
        "verify",
        "--m",
        "2",
        "--N",
        "2",
        "--field",
        "real",
        "--trials",
        "0",
        "--include-littlewood",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2, "header plus one report row");
    assert!(lines[1].starts_with("littlewood,2,2,real,"));
    assert!(lines[1].contains("1.4142135623730951e0"));
    assert!(lines[1].contains("pass"));
    assert!(!lines[1].contains("fail"));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = [
        "verify", "--m", "3", "--N", "2", "--field", "complex", "--trials", "3", "--seed", "42",
        "--format", "jsonl",
    ];
    let a = bh(&args);
    let b = bh(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let a = bh(&["ratios", "--family", "recursive-complex", "--max", "50"]);
    let b = bh(&["ratios", "--family", "recursive-complex", "--max", "50"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn jsonl_rows_carry_schema_version() {
    let out = bh(&["limits", "--format", "jsonl"]);
    assert!(out.status.success());
    for line in stdout(&out).lines() {
        assert!(line.starts_with("{\"command\":\"limits\"") || line.contains("\"schema\":1"));
        assert!(line.contains("\"schema\":1"));
    }
}

#[test]
fn usage_errors_exit_two() {
    // Unknown family value.
    let out = bh(&["constants", "--family", "unknown-family"]);
    assert_eq!(out.status.code(), Some(2));
    // Unknown command.
    let out = bh(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    // Domain error from the library: table bound below 2.
    let out = bh(&["constants", "--family", "queffelec", "--max", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn resource_errors_exit_one() {
    // 4^12 tensor entries exceed the form budget.
    let out = bh(&["verify", "--m", "12", "--N", "4", "--trials", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn failing_claims_exit_one() {
    // An envelope base barely above 1 is unreachable at small n_max.
    let out = bh(&[
        "claims",
        "--family",
        "recursive-real",
        "--mode",
        "gamma",
        "--n-max",
        "4096",
        "--scan-end",
        "4000",
        "--envelope-c",
        "1.000000001",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("false"));
}

#[test]
fn claims_pass_at_moderate_scale() {
    let out = bh(&[
        "claims",
        "--family",
        "recursive-complex",
        "--n-max",
        "16384",
        "--scan-end",
        "16000",
        "--claim1-n",
        "4000",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!stdout(&out).contains("false"));
}

#[test]
fn form_files_round_trip_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("littlewood.form");
    std::fs::write(
        &path,
        "m 2\nN 2\nfield real\nlayout row-major\n1\n1\n1\n-1\n",
    )
    .unwrap();
    let out = bh(&["verify", "--trials", "0", "--form", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("file:"));
    assert!(text.contains("pass"));

    // A malformed file is a usage error.
    std::fs::write(&path, "m 2\nN 2\nfield real\nlayout diagonal\n").unwrap();
    let out = bh(&["verify", "--trials", "0", "--form", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_path_and_env_dir_are_respected() {
    let dir = tempfile::tempdir().unwrap();
    let direct = dir.path().join("limits.csv");
    let out = bh(&["limits", "--output", direct.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let written = std::fs::read_to_string(&direct).unwrap();
    assert!(written.starts_with("kind,value"));

    // Relative paths land under BH_OUTPUT_DIR.
    let out = Command::new(env!("CARGO_BIN_EXE_bh"))
        .args(["limits", "--output", "rel.csv"])
        .env("BH_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("rel.csv").exists());
}

#[test]
fn extended_precision_limits_print_31_digits() {
    let out = bh(&["limits", "--precision", "extended"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(
        text.contains("even-ratio,1.440252689869445453159153996350e0"),
        "got:\n{text}"
    );
}
