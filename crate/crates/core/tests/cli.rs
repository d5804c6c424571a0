//! End-to-end runs of the `strongdrive` binary.

use std::path::Path;
use std::process::{Command, Output};

fn strongdrive(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strongdrive"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn header(csv: &str) -> &str {
    csv.lines().next().unwrap()
}

#[test]
fn simulate_writes_default_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = strongdrive(&["simulate", "--t-max", "5", "--samples", "11"], dir.path());
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 1);
    assert!(stdout.contains("norm drift"));

    let csv = std::fs::read_to_string(dir.path().join("simulate.csv")).unwrap();
    assert_eq!(
        header(&csv),
        "t,re_psi0,im_psi0,re_psi1,im_psi1,pop_excited,norm"
    );
    assert_eq!(csv.lines().count(), 12);
    assert!(!csv.contains('\r'));
    let last: Vec<f64> = csv
        .lines()
        .last()
        .unwrap()
        .split(',')
        .map(|x| x.parse().unwrap())
        .collect();
    assert_eq!(last[0], 5.0);
    assert!((last[6] - 1.0).abs() < 1e-9);
    assert!((last[5] - (last[3] * last[3] + last[4] * last[4])).abs() < 1e-15);
}

#[test]
fn compare_reports_fidelity_column() {
    let dir = tempfile::tempdir().unwrap();
    let out = strongdrive(
        &[
            "compare",
            "--delta",
            "0.05",
            "--t-max",
            "4",
            "--samples",
            "9",
            "--out",
            "c.csv",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("max infidelity"));
    let csv = std::fs::read_to_string(dir.path().join("c.csv")).unwrap();
    assert_eq!(
        header(&csv),
        "t,re_psi0,im_psi0,re_psi1,im_psi1,pop_excited,fidelity_vs_exact,norm"
    );
    for line in csv.lines().skip(1) {
        let f: f64 = line.split(',').nth(6).unwrap().parse().unwrap();
        assert!(f > 1.0 - 1e-4 && f <= 1.0);
    }
}

#[test]
fn scan_commands_write_parameter_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = strongdrive(
        &[
            "scan-rwa", "--delta", "1", "--g", "0.5", "--omegas", "0.5,1,2", "--t-max", "6",
        ],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.path().join("scan-rwa.csv")).unwrap();
    assert_eq!(header(&csv), "axis,metric,delta,g,omega,horizon");
    assert_eq!(csv.lines().count(), 4);

    let out = strongdrive(
        &[
            "scan-delta",
            "--deltas",
            "0.2,0.1",
            "--t-max",
            "3",
            "--samples",
            "13",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("scan-delta.csv")).unwrap();
    let rows: Vec<Vec<f64>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0][1] > rows[1][1], "infidelity shrinks with Δ");
    assert_eq!(rows[1][2], 0.1);
}

#[test]
fn phase_integral_rows_cover_both_signs() {
    let dir = tempfile::tempdir().unwrap();
    let out = strongdrive(
        &["phase-integral", "--g", "3", "--samples", "5"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("phase-integral.csv")).unwrap();
    assert_eq!(
        header(&csv),
        "t,sign,re_quadrature,im_quadrature,err_quadrature,re_bessel,im_bessel,err_bessel,discrepancy"
    );
    assert_eq!(csv.lines().count(), 11);
    for line in csv.lines().skip(1) {
        let d: f64 = line.split(',').nth(8).unwrap().parse().unwrap();
        assert!(d < 1e-9);
    }
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["simulate", "--omega", "0"],
        vec!["simulate", "--unknown"],
        vec!["approx", "--alpha", "2"],
        vec!["compare", "--config", "missing.json"],
    ] {
        let out = strongdrive(&args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn unwritable_output_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = strongdrive(
        &["simulate", "--out", "no/such/dir/x.csv", "--t-max", "1"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let out = strongdrive(&["--help"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("scan-delta"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.json"),
        r#"{"command": "simulate", "delta": 0.2, "g": 2.0, "t-max": 2.0, "samples": 3, "out": "from_file.csv"}"#,
    )
    .unwrap();
    let out = strongdrive(
        &["compare", "--config", "run.json", "--samples", "5"],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.path().join("from_file.csv")).unwrap();
    assert!(header(&csv).contains("fidelity_vs_exact"));
    assert_eq!(csv.lines().count(), 6);
}
