//! Runs the `chorefair` binary against the fixtures in `tests/data`.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chorefair"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

/// Asserts a failure with the given exit code and a single `error: <tag>:` line.
fn assert_error(out: &Output, code: i32, tag: &str) {
    assert_eq!(out.status.code(), Some(code), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let err = String::from_utf8_lossy(&out.stderr);
    let lines: Vec<&str> = err.lines().collect();
    assert_eq!(lines.len(), 1, "{err}");
    assert!(lines[0].starts_with(&format!("error: {tag}: ")), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn eval_reproduces_example_one() {
    let inst = data("example1.json");
    let out = run(&["eval", "--instance", &inst, "--allocation", &data("example1_b.json")]);
    assert_eq!(
        stdout_json(&out),
        json!({"EF": "7/3", "EF1": "1", "EFX": "2", "MMS": "7/5", "PMMS": "7/5"})
    );
    let out = run(&["eval", "--instance", &inst, "--allocation", &data("example1_a.json"), "--criteria", "EF"]);
    assert_eq!(stdout_json(&out), json!({"EF": "1"}));
}

#[test]
fn eval_full_reports_shares() {
    let out = run(&[
        "eval",
        "--instance",
        &data("example1.json"),
        "--allocation",
        &data("example1_b.json"),
        "--full",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["mms_values"], json!(["5", "7", "10"]));
}

#[test]
fn output_is_byte_stable() {
    let args = ["search", "--instance", &data("example1.json"), "--criterion", "PMMS"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn mms_engines_agree_from_the_cli() {
    let inst = data("example1.json");
    for engine in ["enumerate", "class", "additive"] {
        let v = stdout_json(&run(&["mms", "--instance", &inst, "--agent", "1", "--engine", engine]));
        assert_eq!(v["value"], "7", "{engine}");
        assert_eq!(v["witness"].as_array().unwrap().len(), 3);
    }
    let v = stdout_json(&run(&["mms", "--instance", &inst, "--agent", "0", "--k", "2", "--set", "0,1,2"]));
    assert_eq!(v["value"], "5");
}

#[test]
fn allocate_round_robin_and_trace() {
    let inst = data("example1.json");
    let v = stdout_json(&run(&["allocate", "--instance", &inst, "--algorithm", "round_robin"]));
    assert_eq!(v["social_cost"], "9");
    assert!(v.get("trace").is_none());
    let v = stdout_json(&run(&[
        "allocate",
        "--instance",
        &inst,
        "--algorithm",
        "round_robin",
        "--order",
        "2,1,0",
        "--trace",
    ]));
    let trace = v["trace"].as_array().unwrap();
    assert_eq!(trace.len(), 7);
    assert_eq!(trace[0]["step"], "pick");
    assert_eq!(trace[0]["agent"], 2);
}

#[test]
fn family_list_and_json() {
    let out = run(&["family", "--list"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 27);

    let v = stdout_json(&run(&["family", "ef1-mms-tight", "--n", "3", "--alpha", "2", "--measure"]));
    assert_eq!(v["family_id"], "EF1_MMS_TIGHT");
    assert_eq!(v["expected"]["target_ratio_MMS"], "2");
    assert_eq!(v["measured"]["source_alpha"], "2");
}

#[test]
fn verify_writes_a_canonical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("connections.csv");
    let p = path.display().to_string();
    let out = run(&["verify", "--suite", "connections", "--n-max", "3", "--out", &p]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("proposition_id,n,alpha,epsilon,expected,observed,status"));
    let rows: Vec<&str> = lines.collect();
    assert!(rows.len() > 100);
    assert!(rows.iter().all(|r| r.ends_with(",pass")));
    let ids: Vec<&str> = rows.iter().map(|r| r.split(',').next().unwrap()).collect();
    assert!(ids.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn input_errors_exit_with_two() {
    let inst = data("example1.json");
    assert_error(
        &run(&["eval", "--instance", &inst, "--allocation", &data("overlapping.json")]),
        2,
        "partition",
    );
    assert_error(
        &run(&["eval", "--instance", &data("missing.json"), "--allocation", &data("example1_a.json")]),
        2,
        "parse",
    );
    assert_error(&run(&["mms", "--instance", &inst, "--agent", "5"]), 2, "bounds");
    assert_error(
        &run(&["allocate", "--instance", &inst, "--algorithm", "pmms32"]),
        2,
        "requires_normalization",
    );
    assert_error(&run(&["family", "PMMS_MMS_LB", "--n", "4"]), 2, "family_param");
    assert_error(&run(&["family", "NOT_A_FAMILY"]), 2, "usage");
    assert_error(&run(&["search", "--instance", &inst, "--criterion", "EF", "--alpha", "1/2"]), 2, "argument");
    assert_error(&run(&["frobnicate"]), 2, "usage");
}
