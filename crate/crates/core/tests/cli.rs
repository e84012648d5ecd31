use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_maskent"));
    cmd.env_remove("MASKENT_BUDGET");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

#[test]
fn field_dumps_match_golden_files() {
    for (args, file) in [
        (&["field", "--p", "2", "--m", "2"][..], "gf4.json"),
        (&["field", "--q", "8"], "gf8.json"),
        (&["field", "--p", "3", "--m", "2"], "gf9.json"),
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(0));
        let expected: Value =
            serde_json::from_str(&std::fs::read_to_string(golden(file)).unwrap()).unwrap();
        assert_eq!(json(&out), expected, "{file}");
    }
}

#[test]
fn tightness_odd_q() {
    let out = run(&["tightness", "--q", "3", "--n", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let h2 = v["report"]["avg_h2"].as_f64().unwrap();
    assert!((h2 - 0.8479969).abs() < 1e-7);
    assert!((v["predictions"]["avg_h2"].as_f64().unwrap() - h2).abs() < 1e-9);
    assert_eq!(v["square_map"], Value::Bool(true));
    assert_eq!(v["violations"], serde_json::json!([]));
}

#[test]
fn exhaustive_campaign_gf2_squared() {
    let out = run(&["campaign", "--q", "2", "--n", "2", "--suite", "exhaustive"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["max_avg_cp"], "9/16");
    assert_eq!(v["argmax"].as_array().unwrap().len(), 16);
    assert_eq!(v["instances"].as_array().unwrap().len(), 256);
}

#[test]
fn campaigns_are_byte_identical() {
    let args = ["campaign", "--q", "3", "--n", "2", "--suite", "random", "--samples", "200", "--seed", "42"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let csv = ["search", "--q", "2", "--n", "2", "--iters", "500", "--seed", "5", "--format", "csv"];
    assert_eq!(run(&csv).stdout, run(&csv).stdout);
}

#[test]
fn csv_export() {
    let out = run(&["campaign", "--q", "3", "--n", "1", "--suite", "exhaustive", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("digest,avg_cp,avg_h2,avg_shannon,coordinatewise,equality"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 27);
    assert!(rows.iter().all(|r| r.split(',').nth(1) == Some("5/9") && r.ends_with("true,true")));
}

#[test]
fn verify_table_file_and_round_trip() {
    let out = run(&["verify", "--table", golden("square_gf3.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["report"]["avg_cp"], "5/9");
    assert_eq!(v["table"]["outputs"], serde_json::json!([[0], [1], [1]]));

    // The emitted table loads back to the same table.
    let dir = tempfile::tempdir().unwrap();
    let emitted = run(&["verify", "--q", "4", "--n", "2", "--function", "reverse"]);
    let table = json(&emitted)["table"].clone();
    let path = dir.path().join("t.json");
    std::fs::write(&path, serde_json::to_string(&table).unwrap()).unwrap();
    let loaded = maskent::cli::load_table(&path).unwrap();
    assert_eq!(serde_json::to_value(loaded.to_file()).unwrap(), table);
    let again = run(&["verify", "--table", path.to_str().unwrap()]);
    assert_eq!(json(&again)["digest"], json(&emitted)["digest"]);
}

#[test]
fn non_coordinatewise_table_reports_inequality() {
    let out = run(&["verify", "--q", "2", "--n", "2", "--function", "reverse", "--per-k"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["report"]["avg_cp"], "5/16");
    assert_eq!(v["report"]["equality_holds"], Value::Bool(false));
    assert_eq!(v["report"]["per_k"].as_array().unwrap().len(), 4);
}

#[test]
fn bad_table_files_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("short.json", r#"{"p":3,"m":1,"n":1,"outputs":[[0],[1]]}"#, "not total"),
        ("range.json", r#"{"p":3,"m":1,"n":1,"outputs":[[0],[1],[3]]}"#, "out of range"),
        ("junk.json", "{not json", "key must be a string"),
        ("field.json", r#"{"p":6,"m":1,"n":1,"outputs":[]}"#, "not prime"),
    ];
    for (name, body, needle) in cases {
        let path = dir.path().join(name);
        std::fs::write(&path, body).unwrap();
        let out = run(&["verify", "--table", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{name}");
        assert!(out.stdout.is_empty());
        let err = String::from_utf8(out.stderr).unwrap();
        assert_eq!(err.lines().count(), 1, "{err}");
        assert!(err.contains(needle), "{name}: {err}");
    }
    let missing = run(&["verify", "--table", "/nonexistent/table.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn usage_and_field_errors_exit_2() {
    for args in [
        &["field", "--q", "12"][..],
        &["field", "--p", "9"],
        &["campaign", "--q", "2", "--n", "1"],
        &["campaign", "--q", "2", "--n", "1", "--suite", "annealing"],
        &["tightness", "--q", "3"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn budget_env_is_honoured() {
    let out = bin()
        .args(["campaign", "--q", "2", "--n", "2", "--suite", "exhaustive"])
        .env("MASKENT_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("budget"));

    let bad = bin().args(["field", "--q", "4"]).env("MASKENT_BUDGET", "lots").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn out_path_receives_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&["tightness", "--q", "4", "--n", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["report"]["avg_cp"], "7/16");
}
