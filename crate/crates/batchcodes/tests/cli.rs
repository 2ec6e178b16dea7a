//! End-to-end tests of the command-line interface: pipelines, exit codes
//! and serialized formats.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_batchcodes"))
}

fn run_with_stdin(args: &[&str], stdin: &[u8]) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn");
    child.stdin.as_mut().unwrap().write_all(stdin).unwrap();
    child.wait_with_output().expect("wait")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn construct_then_verify_async_pipeline() {
    let constructed = bin()
        .args(["construct", "t3", "--m", "3"])
        .output()
        .unwrap();
    assert!(constructed.status.success());
    let doc = stdout_json(&constructed);
    assert_eq!(doc["report"]["k"], 9);
    assert_eq!(doc["report"]["rho"], 6);

    let verified = run_with_stdin(&["verify", "async", "--t", "3"], &constructed.stdout);
    assert_eq!(verified.status.code(), Some(0));
    let verdict = stdout_json(&verified);
    assert_eq!(verdict["holds"], true);
}

#[test]
fn simplex_async_verify_fails_with_witness() {
    let constructed = bin().args(["construct", "simplex"]).output().unwrap();
    assert!(constructed.status.success());

    let verified = run_with_stdin(&["verify", "async", "--t", "4"], &constructed.stdout);
    assert_eq!(verified.status.code(), Some(1));
    let verdict = stdout_json(&verified);
    assert_eq!(verdict["holds"], false);
    assert_eq!(verdict["witness"]["query"], serde_json::json!([1, 1, 1, 1]));
    assert_eq!(verdict["witness"]["newcomer"], 2);
}

#[test]
fn simplex_is_batch_via_cli() {
    let constructed = bin().args(["construct", "simplex"]).output().unwrap();
    let verified = run_with_stdin(&["verify", "batch", "--t", "4"], &constructed.stdout);
    assert_eq!(verified.status.code(), Some(0));
}

#[test]
fn theorem5_search_prints_equality() {
    let out = bin()
        .args([
            "search", "theorem5", "--eta", "7", "--r", "3", "--kappa", "2",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("B=F=7"), "got: {text}");
}

#[test]
fn search_b_emits_witness_hypergraph() {
    let out = bin()
        .args(["search", "b", "--eta", "6", "--r", "3", "--kappa", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["B"], 4);
    assert_eq!(doc["exact"], true);
}

#[test]
fn certify_subcommand_exit_codes() {
    let e1 = bin().args(["construct", "example1"]).output().unwrap();
    let ok = run_with_stdin(
        &["certify-theorem1", "--t", "3", "--target", "batch"],
        &e1.stdout,
    );
    assert_eq!(ok.status.code(), Some(0));
    let doc = stdout_json(&ok);
    assert_eq!(doc["status"], "found");
    assert_eq!(doc["kept_parities"], serde_json::json!([1, 2, 3, 4]));

    let sx = bin().args(["construct", "simplex"]).output().unwrap();
    let nope = run_with_stdin(
        &["certify-theorem1", "--t", "4", "--target", "batch"],
        &sx.stdout,
    );
    assert_eq!(nope.status.code(), Some(1));
}

#[test]
fn malformed_matrix_reports_line_and_exits_3() {
    let out = run_with_stdin(&["verify", "batch", "--t", "2"], b"1010\n10x0\n");
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2"), "stderr: {err}");
}

#[test]
fn bounds_renders_table() {
    let out = bin()
        .args(["bounds", "--t", "3", "--k-range", "4..9"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("rho"));
    assert!(text.lines().count() >= 7);
}

#[test]
fn simulate_runs_and_audits() {
    let dir = std::env::temp_dir().join(format!("batchcodes-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg_path = dir.join("sim.json");
    let trace_path = dir.join("trace.jsonl");
    std::fs::write(
        &cfg_path,
        serde_json::json!({
            "code": { "builtin": "example1" },
            "t": 3,
            "workload": [1, 4, 1, 4, 1, 4, 1, 4],
            "latency": { "type": "exponential", "mean": 1.0 },
            "mode": "asynchronous",
            "seed": 42
        })
        .to_string(),
    )
    .unwrap();

    let run = |args: &[&str]| bin().args(args).output().unwrap();
    let out = run(&[
        "simulate",
        "--config",
        cfg_path.to_str().unwrap(),
        "--trace",
        trace_path.to_str().unwrap(),
        "--audit",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("audit: "));
    assert!(text.contains("0 violations"));

    // determinism across process invocations
    let first = std::fs::read(&trace_path).unwrap();
    let out2 = run(&[
        "simulate",
        "--config",
        cfg_path.to_str().unwrap(),
        "--trace",
        trace_path.to_str().unwrap(),
    ]);
    assert_eq!(out2.status.code(), Some(0));
    let second = std::fs::read(&trace_path).unwrap();
    assert_eq!(first, second);

    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn usage_errors_exit_3() {
    let out = bin().args(["verify", "batch"]).output().unwrap(); // missing --t
    assert_eq!(out.status.code(), Some(3));
}
