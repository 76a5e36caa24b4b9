use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smallsums")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn catalog_lists_forms() {
    let o = run(&["catalog"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("tau_k:"));
    assert!(s.contains("product:"));
}

#[test]
fn eval_zeta_two() {
    let o = run(&["eval", "one", "--sigma", "2", "--n", "1e5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let re = v["value"][0].as_f64().unwrap();
    let tail = v["tail_bound"].as_f64().unwrap();
    assert!((re - std::f64::consts::PI.powi(2) / 6.0).abs() <= tail);
    assert_eq!(v["rigorous"], Value::Bool(true));
}

#[test]
fn verify_csv_passes() {
    let o = run(&["verify", "moebius", "--gamma", "0", "--x-grid", "1e3,1e4,1e5", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    assert!(s.starts_with("x,disc_re,disc_im,disc_abs,envelope\n"));
    assert!(s.contains("# verdict,decay_trend,pass"));
}

#[test]
fn verify_json_keys() {
    let o = run(&["verify", "legendre_chi:5", "--gamma", "none", "--x-grid", "1e3,1e4,1e5,1e6"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys.len(), 4);
    for k in ["config", "gamma", "grid", "verdicts"] {
        assert!(keys.contains(&k), "missing {k}");
    }
}

#[test]
fn failed_verdict_exits_two() {
    let o = run(&[
        "verify",
        "tau_minus_kappa:1.4142135623730951",
        "--remark",
        "--a",
        "2",
        "--gamma",
        "none",
        "--x-grid",
        "1e3,1e4,1e5",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn errors_exit_one() {
    assert_eq!(run(&["eval", "zeta"]).status.code(), Some(1));
    assert_eq!(run(&["eval", "moebius", "--n", "1e6", "--limit", "1e5"]).status.code(), Some(1));
    assert_eq!(run(&["eval", "moebius", "--sigma", "0.5"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "moebius", "--a", "1.5", "--x-grid", "1e3"]).status.code(), Some(1));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# sieve demo\nz = 10\nu = 2\nn = 1e4\nformat = csv\n").unwrap();
    let cfg_s = cfg.to_str().unwrap();

    let o = run(&["--config", cfg_s, "sieve-demo"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let row: Vec<&str> = s.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[4], "10000");
    assert!(row[0].starts_with("1.0000000000000000e1"));

    let o = run(&["--config", cfg_s, "sieve-demo", "--n", "2e4"]);
    let s = stdout(&o);
    assert_eq!(s.lines().nth(1).unwrap().split(',').nth(4), Some("20000"));
}

#[test]
fn out_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.svg");
    let o = run(&[
        "verify",
        "moebius",
        "--gamma",
        "none",
        "--x-grid",
        "1e3,1e4",
        "--format",
        "svg",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.code() == Some(0) || o.status.code() == Some(2));
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    assert!(svg.contains("polyline"));
    assert!(!Path::new(&path).with_extension("json").exists());
}

#[test]
fn thread_count_does_not_change_output() {
    let args = |n: &'static str| ["--threads", n, "zeros", "moebius", "--t-max", "3", "--x", "1e5"];
    let a = run(&args("1"));
    let b = run(&args("4"));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
