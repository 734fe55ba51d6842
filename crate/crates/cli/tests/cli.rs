//! End-to-end checks of the binary: determinism, exit codes, config
//! handling, and the documented CSV shapes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_causalcell"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_with_env(args: &[&str], key: &str, value: &str) -> Output {
    bin().args(args).env(key, value).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn unitary_optimal_reference_row() {
    let out = run(&["unitary-optimal", "--omega", "1", "--k", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "omega,k,t_min,prob_minus,fidelity_excited");
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let t_min: f64 = row[2].parse().unwrap();
    let prob: f64 = row[3].parse().unwrap();
    let fid: f64 = row[4].parse().unwrap();
    assert!((t_min - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    assert!((prob - 8.0 / 9.0).abs() < 1e-9);
    assert!(fid > 1.0 - 1e-9);
}

/// Acceptance criterion 11: two runs of every documented command with
/// identical configuration produce byte-identical CSV.
#[test]
fn criterion_11_cli_determinism() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["unitary", "--steps", "40"],
        vec!["unitary", "--omega", "2", "--x1", "0.5", "--y1", "0.2", "--x2", "1.5", "--y2", "0.6", "--steps", "25", "--t-max", "3"],
        vec!["unitary-optimal", "--omega", "1", "--k", "2"],
        vec!["gibbs", "--omega", "1", "--coupling", "1", "--p", "0.3", "--steps", "40"],
        vec!["gibbs", "--beta", "1.5", "--steps", "30"],
        vec!["gibbs-compare", "--omega", "1", "--coupling", "1", "--p-steps", "101"],
        vec!["stabilize", "--steps", "50", "--t-max", "0.25"],
        vec!["stabilize", "--branch-duration", "full", "--steps", "20", "--t-max", "0.12"],
        vec!["rescue-time"],
    ];
    let mut all_identical = true;
    for args in &cases {
        let a = run(args);
        let b = run(args);
        assert!(a.status.success(), "command {args:?} failed");
        assert!(!a.stdout.is_empty());
        all_identical &= a.stdout == b.stdout;
    }
    println!(
        "[{}] criterion 11 (CLI determinism): {} commands re-run byte-identically",
        if all_identical { "PASS" } else { "FAIL" },
        cases.len()
    );
    assert!(all_identical);
}

#[test]
fn parallel_runs_match_serial_runs() {
    let args = ["gibbs-compare", "--omega", "1", "--coupling", "2", "--p-steps", "101"];
    let serial = run(&args);
    let parallel = run_with_env(&args, "CAUSALCELL_THREADS", "4");
    assert!(serial.status.success() && parallel.status.success());
    assert_eq!(serial.stdout, parallel.stdout);
}

#[test]
fn gibbs_compare_orderings_hold_in_output() {
    let out = run(&["gibbs-compare", "--omega", "1", "--coupling", "1", "--p-steps", "501"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "p,f,g,h,f_weak_approx");
    let mut rows = 0;
    for line in lines {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!(v[1] >= v[2] - 1e-9, "f < g at p = {}", v[0]);
        assert!(v[1] >= v[3] - 1e-9, "f < h at p = {}", v[0]);
        rows += 1;
    }
    assert_eq!(rows, 501);
}

#[test]
fn rescue_time_row_in_reference_window() {
    let out = run(&["rescue-time"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t_rescue,fidelity,prob_plus");
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert!(row[0] > 0.188 && row[0] < 0.208);
    assert!(row[1] >= 0.99);
    assert!(row[2] > 0.0 && row[2] <= 1.0);
}

#[test]
fn invalid_arguments_exit_2() {
    // unknown flag (clap)
    let out = run(&["unitary", "--bogus", "1"]);
    assert_eq!(out.status.code(), Some(2));
    // bad numeric range caught by validation
    let out = run(&["gibbs", "--p", "0.9"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["unitary", "--steps", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_3() {
    // without the auxiliary drive the battery never returns above threshold
    let out = run(&["rescue-time", "--ha-x", "0", "--ha-y", "0"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn config_file_and_flag_override() {
    let dir = std::env::temp_dir();
    let cfg = dir.join("causalcell_test_config.txt");
    std::fs::write(
        &cfg,
        "# sweep setup\nomega = 2.0\nk = 1\n",
    )
    .unwrap();
    let from_cfg = run(&["unitary-optimal", "--config", cfg.to_str().unwrap()]);
    assert!(from_cfg.status.success());
    let text = stdout(&from_cfg);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let t_min: f64 = row[2].parse().unwrap();
    assert!((t_min - std::f64::consts::FRAC_PI_2 / 2.0).abs() < 1e-15, "omega from config");

    // flag overrides the file value
    let overridden = run(&["unitary-optimal", "--config", cfg.to_str().unwrap(), "--omega", "1"]);
    let text = stdout(&overridden);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let t_min: f64 = row[2].parse().unwrap();
    assert!((t_min - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    std::fs::remove_file(&cfg).ok();
}

#[test]
fn out_flag_writes_identical_bytes() {
    let dir = std::env::temp_dir();
    let path: PathBuf = dir.join("causalcell_test_out.csv");
    let args = ["stabilize", "--steps", "20", "--t-max", "0.2", "--out"];
    let a = bin().args(args).arg(&path).output().unwrap();
    assert!(a.status.success());
    let first = std::fs::read(&path).unwrap();
    let b = bin().args(args).arg(&path).output().unwrap();
    assert!(b.status.success());
    let second = std::fs::read(&path).unwrap();
    assert_eq!(first, second);
    assert!(first.starts_with(b"t,P,C,prob_plus,fidelity\n"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn unitary_csv_shape() {
    let out = run(&["unitary", "--steps", "10", "--t-max", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,prob_minus,rho11,rho22,coherence_abs,energy");
    assert_eq!(lines.count(), 10);
}
