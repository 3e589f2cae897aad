//! End-to-end checks of the `gr2` binary: exit codes, JSON certificate
//! shape, and byte-identical output across thread counts.

use std::process::Command;

fn gr2() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gr2"))
}

fn json_out(args: &[&str]) -> (serde_json::Value, i32) {
    let out = gr2().args(args).output().expect("binary runs");
    let code = out.status.code().unwrap_or(-1);
    let text = String::from_utf8(out.stdout).expect("utf8");
    (serde_json::from_str(&text).expect("valid JSON"), code)
}

fn strip_timing(mut v: serde_json::Value) -> serde_json::Value {
    v["timing_ms"] = serde_json::Value::from(0u64);
    v
}

#[test]
fn rank_json_genus3() {
    let (v, code) = json_out(&["rank", "--genus", "3", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"], "pass");
    assert_eq!(v["details"]["lambda3"], 20);
    assert_eq!(v["details"]["lambda2_lambda3"], 190);
    assert_eq!(v["details"]["d2prime"], 105);
    assert_eq!(v["details"]["image_B"], 106);
    assert_eq!(v["details"]["kernel_K"], 84);
    assert_eq!(v["artifact_version"], "1.0.0");
}

#[test]
fn usage_errors_exit_2() {
    let out = gr2().args(["rank", "--genus", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = gr2().args(["verify", "no-such-suite"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = gr2()
        .args(["invariants", "tau1-pb", "not-a-symbol", "a1", "a2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn constraint_violation_exits_1() {
    // the boundary class must pair trivially with the subsurface basis
    let out = gr2()
        .args(["invariants", "tau1-bp", "(a1,b1)", "b1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn invariant_values() {
    let (v, code) = json_out(&[
        "invariants",
        "tau1-pb",
        "a1",
        "a2",
        "b3",
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["details"]["tau1"], "-a1^a2^b3");

    let (v, code) = json_out(&["invariants", "beta-bscc", "(a1,b1)", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(v["details"]["beta"], "a1*b1");

    let (v, code) = json_out(&[
        "invariants",
        "tau2-bscc",
        "(a1,b1),(a2,b2)",
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    let rendered = v["details"]["tau2"].as_str().unwrap();
    assert!(rendered.starts_with("1/2 ["), "got {rendered}");
}

#[test]
fn suite_certificates_thread_independent() {
    let run = |threads: &str| -> serde_json::Value {
        let (v, code) = json_out(&[
            "verify",
            "theorem-k",
            "--genus",
            "3",
            "--format",
            "json",
            "--threads",
            threads,
        ]);
        assert_eq!(code, 0);
        strip_timing(v)
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn kernel_export_shape() {
    let (v, code) = json_out(&["kernel", "--genus", "3", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(v["details"]["rank"], 84);
    let basis = v["details"]["basis"].as_array().unwrap();
    assert_eq!(basis.len(), 84);
    // keys look like "a1a2a3|b3a4a5"
    let first = basis[0].as_object().unwrap();
    let key = first.keys().next().unwrap();
    assert!(key.contains('|'), "key {key}");
    assert!(key.starts_with('a') || key.starts_with('b'));
}

#[test]
fn out_file_written() {
    let dir = std::env::temp_dir().join(format!("gr2-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cert.json");
    let out = gr2()
        .args([
            "verify",
            "b-form",
            "--genus",
            "3",
            "--out",
            path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let body = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["result"], "pass");
    std::fs::remove_dir_all(&dir).ok();
}
