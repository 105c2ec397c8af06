use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn gfix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gfix")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gfix-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn solve_from_one_reaches_zero() {
    let out = gfix(&["solve", "--scenario", "ex2.1", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["report"]["values"], serde_json::json!(["1", "1/4", "0", "0"]));
    assert_eq!(v["report"]["verdict"]["kind"], "fixed_point_reached");
}

#[test]
fn default_seed_is_the_first_witness() {
    let v = json(&gfix(&["solve", "--example", "ex2.7"]));
    assert_eq!(v["report"]["values"], serde_json::json!(["1", "2", "3", "3"]));
}

#[test]
fn uniqueness_failure_exits_one() {
    let out = gfix(&["check-uniqueness", "--scenario", "ex3.1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["verdict"], "fail");
}

#[test]
fn contraction_needs_a_kind() {
    let out = gfix(&["check-contraction", "--example", "ex2.7"]);
    assert_eq!(out.status.code(), Some(2));
    let out = gfix(&["check-contraction", "--example", "ex2.7", "--kind", "thm2.9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn contraction_report_lists_violations() {
    let out = gfix(&["check-contraction", "--example", "ex2.7", "--kind", "thm2.7"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let first = &v["report"]["violations"][0];
    assert_eq!(first["tuple"], serde_json::json!([0, 0]));
    assert_eq!(first["F"], "3");
    assert_eq!(v["points"][0], "1");
}

#[test]
fn malformed_scenario_reports_position() {
    let path = scratch("bad.json");
    std::fs::write(&path, "{\"id\": \"x\",\n \"points\": [0.5]}").unwrap();
    let out = gfix(&["fixed-points", "--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2, column"), "{err}");
}

#[test]
fn zero_budget_is_a_usage_error() {
    assert_eq!(
        gfix(&["solve", "--example", "ex2.1", "--budget", "0"]).status.code(),
        Some(2)
    );
}

#[test]
fn scenario_files_load_by_path() {
    let path = scratch("ex2.3.json");
    std::fs::write(&path, gfix::corpus::bundled_json("ex2.3").unwrap()).unwrap();
    let out = gfix(&[
        "check-hypotheses",
        "--scenario",
        path.to_str().unwrap(),
        "--format",
        "text",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.contains("condition 2 fail") && text.contains("witness (2, 4)"),
        "{text}"
    );
}

#[test]
fn out_flag_writes_the_report() {
    let path = scratch("axioms.json");
    let out = gfix(&["verify-axioms", "--example", "ex2.6", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "verify-axioms");
}

#[test]
fn coarser_grid_keeps_the_fixed_point() {
    let v = json(&gfix(&["fixed-points", "--example", "ex2.6", "--grid-step", "1/32"]));
    assert_eq!(v["report"]["fixed_points"], serde_json::json!(["1"]));
    assert_eq!(v["points"].as_array().unwrap().len(), 33);
}

#[test]
fn depth_truncates_the_prime_chain() {
    let v = json(&gfix(&["fixed-points", "--example", "ex3.2", "--depth", "4"]));
    assert_eq!(v["points"].as_array().unwrap().len(), 6);
    assert_eq!(v["report"]["fixed_points"], serde_json::json!(["2", "3"]));
}

#[test]
fn constructions_tabulate() {
    let v = json(&gfix(&["construct", "tau", "--example", "ex2.5", "--at", "5/2"]));
    let samples = v["report"]["samples"].as_array().unwrap();
    let last = samples.last().unwrap();
    assert_eq!((last["t"].as_str(), last["value"].as_str()), (Some("5/2"), Some("3/2")));

    let v = json(&gfix(&["construct", "phi2", "--example", "ex2.5"]));
    assert_eq!(v["verdict"], "pass");
    let v = json(&gfix(&[
        "construct",
        "phi1",
        "--example",
        "ex2.5",
        "--depth",
        "3",
        "--alpha",
        "2",
    ]));
    assert_eq!(v["report"]["depth"], 3);
    assert_eq!(v["verdict"], "pass");
}

#[test]
fn run_corpus_passes() {
    let out = gfix(&["run-corpus", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text.lines().filter(|l| l.contains(" ok ")).count(),
        gfix::EXAMPLE_IDS.len()
    );
}
