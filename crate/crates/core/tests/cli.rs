use std::path::Path;
use std::process::Command;

use d2d_caching::cli::{fixture_config, run, ScenarioConfig, FIXTURES, SEED_ENV};
use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_d2dcache"));
    cmd.env_remove(SEED_ENV);
    cmd
}

fn write_config(dir: &Path, json: &str) -> std::path::PathBuf {
    let path = dir.join("scenario.json");
    std::fs::write(&path, json).unwrap();
    path
}

fn without_clock(text: &str) -> Value {
    let mut v: Value = serde_json::from_str(text).unwrap();
    v.as_object_mut().unwrap().remove("wall_clock_seconds");
    v
}

#[test]
fn run_writes_record_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), r#"{"scheme":"hypercube","params":{"q":3,"c":1},"verify":true}"#);
    let out = dir.path().join("out");
    let status = bin()
        .args(["run", "--config"])
        .arg(&config)
        .arg("--output")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let record: Value = serde_json::from_str(&std::fs::read_to_string(out.join("record.json")).unwrap()).unwrap();
    assert_eq!(record["packetization"], "27");
    assert_eq!(record["rate"]["exact"], "3/1");
    assert_eq!(record["rate"]["float"], 3.0);
    assert_eq!(record["passed"], true);
}

#[test]
fn records_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{"scheme":"decentralized","params":{"users":40,"q":3,"t_prime":2},"seed":7,"trials":50}"#,
    );
    let mut texts = Vec::new();
    for name in ["a", "b"] {
        let out = dir.path().join(name);
        let status = bin().args(["run", "--config"]).arg(&config).arg("--output").arg(&out).status().unwrap();
        assert_eq!(status.code(), Some(0));
        texts.push(std::fs::read_to_string(out.join("record.json")).unwrap());
    }
    assert_eq!(without_clock(&texts[0]), without_clock(&texts[1]));
    let strip = |t: &str| t.lines().filter(|l| !l.contains("wall_clock_seconds")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&texts[0]), strip(&texts[1]));
}

#[test]
fn seed_falls_back_to_environment() {
    let config = ScenarioConfig::from_json(r#"{"scheme":"hypercube","params":{"q":2}}"#).unwrap();
    assert_eq!(config.seed, None);
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), r#"{"scheme":"decentralized","params":{"users":20,"q":3,"t_prime":2},"trials":5}"#);
    let out = dir.path().join("env");
    let status = bin()
        .env(SEED_ENV, "42")
        .args(["run", "--config"])
        .arg(&path)
        .arg("--output")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let record: Value = serde_json::from_str(&std::fs::read_to_string(out.join("record.json")).unwrap()).unwrap();
    assert_eq!(record["seed"], 42);
}

#[test]
fn configuration_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write_config(dir.path(), r#"{"scheme":"hypercube","params":{"q":3,"bogus":1}}"#);
    let output = bin().args(["run", "--config"]).arg(&unknown).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("bogus"));

    let infeasible = write_config(dir.path(), r#"{"scheme":"hypercube","params":{"q":5,"c":3}}"#);
    let output = bin().args(["run", "--config"]).arg(&infeasible).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(!output.stderr.is_empty());
}

#[test]
fn sweep_writes_rows_in_input_order() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), r#"{"scheme":"hypercube","params":{"q":2}}"#);
    let out = dir.path().join("sweep");
    let status = bin()
        .args(["sweep", "--config"])
        .arg(&config)
        .args(["--axis", "q", "--values", "4,2,3", "--output"])
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let mut reader = csv::Reader::from_path(out.join("sweep.csv")).unwrap();
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        ["axis_value", "packetization", "mean_rate", "std_rate", "centralized_rate", "uncoded_rate", "error"]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    let axis: Vec<&str> = rows.iter().map(|r| &r[0]).collect();
    assert_eq!(axis, ["4", "2", "3"]);
    assert_eq!(&rows[0][1], "256");
    assert_eq!(&rows[0][2], "4");
}

#[test]
fn sweep_keeps_going_past_bad_points() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), r#"{"scheme":"hypercube","params":{"q":2}}"#);
    let out = dir.path().join("sweep");
    let status = bin()
        .args(["sweep", "--config"])
        .arg(&config)
        .args(["--axis", "q", "--values", "1,3", "--output"])
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
    let text = std::fs::read_to_string(out.join("sweep.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("1,,,,,,") && lines[1].len() > 7);
    assert!(lines[2].starts_with("3,27,3,0,"));
}

#[test]
fn single_value_sweep_matches_run() {
    let template = fixture_config("dec-32").unwrap();
    let rows = d2d_caching::cli::sweep(&template, "seed", &["0".to_string()]);
    let record = run(&template).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].mean_rate, record.rate.as_ref().map(|r| r.float));
    assert_eq!(rows[0].packetization, record.packetization);
}

#[test]
fn every_fixture_passes() {
    let output = bin().args(["fixtures", "list"]).output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    let listing = String::from_utf8(output.stdout).unwrap();
    for (name, _) in FIXTURES {
        assert!(listing.contains(name));
        let record = run(&fixture_config(name).unwrap()).unwrap();
        assert!(record.passed, "fixture {name} failed verification");
    }
    let dec = run(&fixture_config("dec-32").unwrap()).unwrap();
    assert_eq!(dec.rate.unwrap().exact, "220/9");
}

#[test]
fn fixture_run_through_binary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("grid");
    let output = bin().args(["fixtures", "run", "grid-81", "--output"]).arg(&out).output().unwrap();
    assert_eq!(output.status.code(), Some(0), "{}", String::from_utf8_lossy(&output.stderr));
    assert!(out.join("record.json").exists());
    let unknown = bin().args(["fixtures", "run", "nope"]).output().unwrap();
    assert_eq!(unknown.status.code(), Some(2));
}
