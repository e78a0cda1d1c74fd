use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn heatpot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heatpot"))
        .args(args)
        .env("HEATPOT_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn run_with_report(cmd: &str, scenario: &str, dir: &Path, tag: &str) -> (i32, Value, String) {
    let report = dir.join(format!("{tag}.json"));
    let values = dir.join(format!("{tag}.csv"));
    let out = heatpot(&[
        cmd,
        scenario,
        "--report",
        report.to_str().unwrap(),
        "--values",
        values.to_str().unwrap(),
    ]);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    (code(&out), doc, std::fs::read_to_string(values).unwrap())
}

#[test]
fn kernel_eval_table() {
    let out = heatpot(&["kernel-eval", "--m", "1", "--n", "1", "--x", "0", "--t", "0.0795775", "--t", "-1"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == "value").unwrap();
    let vals: Vec<f64> = lines.map(|l| l.split(',').nth(col).unwrap().parse().unwrap()).collect();
    assert!((vals[0] - 1.0).abs() < 1e-5, "{vals:?}");
    assert_eq!(vals[1], 0.0);
}

#[test]
fn kernel_eval_usage_errors() {
    assert_eq!(code(&heatpot(&["kernel-eval", "--m", "25", "--x", "0", "--t", "1"])), 2);
    assert_eq!(code(&heatpot(&["kernel-eval", "--m", "1", "--x", "0"])), 2);
    assert_eq!(code(&heatpot(&["kernel-eval", "--m", "1", "--n", "2", "--x", "0", "--t", "1"])), 2);
    assert_eq!(code(&heatpot(&["no-such-command"])), 2);
}

#[test]
fn verify_bundled_interval_scenarios() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["m1_interval_bump", "m2_interval_bump", "m3_interval_bump"] {
        let (rc, doc, csv) = run_with_report("verify-theorem1", name, dir.path(), name);
        assert_eq!(rc, 0, "{name}");
        assert_eq!(doc["schema_version"], 1);
        assert_eq!(doc["scenario"]["name"], name);
        assert_eq!(doc["pass"], true);
        assert_eq!(doc["result"]["levels"].as_array().unwrap().len(), 2);
        assert!(csv.starts_with("level,"));
        for conv in doc["result"]["convergence"].as_array().unwrap() {
            let order = conv["orders"][0].as_f64().unwrap();
            assert!(order >= 1.0, "{name}: {conv}");
        }
    }
}

#[test]
fn reports_are_deterministic_apart_from_timings() {
    let dir = tempfile::tempdir().unwrap();
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timings");
        v
    };
    let (_, a, csv_a) = run_with_report("verify-theorem1", "m2_interval_bump", dir.path(), "a");
    let (_, b, csv_b) = run_with_report("verify-theorem1", "m2_interval_bump", dir.path(), "b");
    assert_eq!(strip(a), strip(b));
    assert_eq!(csv_a, csv_b);
    let (_, a, _) = run_with_report("compare-oracle", "m2_interval_bump", dir.path(), "c");
    let (_, b, _) = run_with_report("compare-oracle", "m2_interval_bump", dir.path(), "d");
    assert_eq!(strip(a), strip(b));
}

#[test]
fn invalid_scenario_files_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = heatpot(&["scenarios", "--show", "m1_interval_bump"]);
    assert_eq!(code(&out), 0);
    let mut sc: Value = serde_json::from_slice(&out.stdout).unwrap();

    sc["source"]["gaussian_bump"]["center"] = serde_json::json!([0.8]);
    let touching = dir.path().join("touching.json");
    std::fs::write(&touching, sc.to_string()).unwrap();
    assert_eq!(code(&heatpot(&["verify-theorem1", touching.to_str().unwrap()])), 2);

    let typo = dir.path().join("typo.json");
    std::fs::write(&typo, r#"{"schema_version": 1, "nmae": "x"}"#).unwrap();
    assert_eq!(code(&heatpot(&["verify-theorem1", typo.to_str().unwrap()])), 2);
    assert_eq!(code(&heatpot(&["verify-theorem1", "no_such_scenario"])), 2);
}

#[test]
fn tight_tolerances_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = heatpot(&["scenarios", "--show", "m2_interval_bump"]);
    let mut sc: Value = serde_json::from_slice(&out.stdout).unwrap();
    sc["tolerances"]["oracle"] = serde_json::json!(1e-12);
    let path = dir.path().join("tight.json");
    std::fs::write(&path, sc.to_string()).unwrap();
    let report = dir.path().join("tight_report.json");
    let out = heatpot(&["compare-oracle", path.to_str().unwrap(), "--report", report.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(doc["pass"], false);
}

#[test]
fn solve_theorem2_scenarios() {
    let dir = tempfile::tempdir().unwrap();
    let (rc, doc, csv) = run_with_report("solve-theorem2", "m1_interval_bump", dir.path(), "zero_phi");
    assert_eq!(rc, 0);
    assert_eq!(doc["result"]["matches_potential"], true);
    assert_eq!(csv.lines().count(), 10);
    let (rc, doc, _) = run_with_report("solve-theorem2", "m1_interval_ramp_phi", dir.path(), "ramp");
    assert_eq!(rc, 0);
    assert!(doc["result"]["max_abs_diff"].as_f64().unwrap() <= 1e-3);
    assert_eq!(code(&heatpot(&["solve-theorem2", "m2_interval_bump"])), 2);

    let report = dir.path().join("probe.json");
    let out = heatpot(&[
        "solve-theorem2",
        "m1_interval_ramp_phi",
        "--probe",
        "0.3@0.4",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(code(&heatpot(&["solve-theorem2", "m1_interval_ramp_phi", "--probe", "0.3"])), 2);
}

#[test]
fn compare_oracle_scenarios() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["m2_interval_bump", "m3_interval_bump"] {
        let (rc, doc, csv) = run_with_report("compare-oracle", name, dir.path(), name);
        assert_eq!(rc, 0, "{name}");
        assert_eq!(doc["result"]["probes"].as_array().unwrap().len(), 10);
        assert_eq!(doc["result"]["seed"], doc["scenario"]["seed"]);
        assert_eq!(csv.lines().count(), 11);
    }
    assert_eq!(code(&heatpot(&["compare-oracle", "m1_interval_bump"])), 2);
}

#[test]
fn bad_thread_count_exits_2() {
    let out = Command::new(env!("CARGO_BIN_EXE_heatpot"))
        .args(["scenarios"])
        .env("HEATPOT_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}
