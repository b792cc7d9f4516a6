//! End-to-end runs of the binary: artifact shapes, exit codes, determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn povmforge(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_povmforge"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn povmforge_with_env(args: &[&str], dir: &Path, key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_povmforge"))
        .args(args)
        .env(key, value)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

#[test]
fn construct_q_writes_two_artifacts_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = povmforge(
        &["construct-q", "--p", "5", "--k", "1", "--f", "0,0,1", "--chi", "1", "--verify"],
        dir.path(),
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let json = dir.path().join("theorem_2_10_q5.ensemble.json");
    let csv = dir.path().join("theorem_2_10_q5.ledger.csv");
    assert!(json.exists() && csv.exists());
    let parsed: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(parsed["construction"], "theorem_2_10");
    assert_eq!(parsed["dim"], 5);
    assert_eq!(parsed["members"].as_array().unwrap().len(), 25);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("overall: PASS"));
}

#[test]
fn identical_configs_yield_byte_identical_artifacts() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let args = ["construct-q", "--p", "3", "--k", "2", "--chi", "1"];
    // Different worker counts must not change a single byte.
    assert!(povmforge_with_env(&args, dir_a.path(), "POVMFORGE_WORKERS", "1").status.success());
    assert!(povmforge_with_env(&args, dir_b.path(), "POVMFORGE_WORKERS", "4").status.success());
    for name in ["theorem_2_10_q9.ensemble.json", "theorem_2_10_q9.ledger.csv"] {
        let a = fs::read(dir_a.path().join(name)).unwrap();
        let b = fs::read(dir_b.path().join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between runs");
    }
}

#[test]
fn construct_q_rejects_even_q_with_machine_readable_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = povmforge(&["construct-q", "--p", "2", "--k", "3"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    let record: serde_json::Value =
        serde_json::from_str(stderr.lines().last().unwrap()).unwrap();
    assert_eq!(record["status"], "error");
    assert!(record["message"].as_str().unwrap().contains("odd q"));
}

#[test]
fn construct_q1_and_reverify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = povmforge(&["construct-q1", "--p", "2", "--k", "1", "--verify"], dir.path());
    assert!(out.status.success());
    let json_path = dir.path().join("theorem_3_5_q2.ensemble.json");
    assert!(json_path.exists());

    let out = povmforge(
        &["verify", "--input", json_path.to_str().unwrap()],
        dir.path(),
    );
    assert!(out.status.success());
    let csv = fs::read_to_string(dir.path().join("theorem_3_5_q2.ensemble.verify.csv")).unwrap();
    assert!(csv.starts_with("case,bound,measured,margin,verdict"));
    let report: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(dir.path().join("theorem_3_5_q2.ensemble.verify.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["construction"], "theorem_3_5");
}

#[test]
fn verify_catches_a_perturbed_member_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    assert!(povmforge(&["construct-q1", "--p", "2", "--k", "1"], dir.path()).status.success());
    let json_path = dir.path().join("theorem_3_5_q2.ensemble.json");
    let mut value: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&json_path).unwrap()).unwrap();
    let entry = &mut value["members"][0][0][0][0];
    *entry = serde_json::json!(entry.as_f64().unwrap() + 1e-3);
    fs::write(&json_path, serde_json::to_string(&value).unwrap()).unwrap();

    let out = povmforge(&["verify", "--input", json_path.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("verification_failed"));
}

#[test]
fn fn_count_brute_force_agrees() {
    let dir = tempfile::tempdir().unwrap();
    let out = povmforge(&["fn-count", "--p", "3", "--k", "1", "--brute"], dir.path());
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("formula: 18"));
    assert!(stdout.contains("brute force: 18"));
}

#[test]
fn fn_check_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let good = povmforge(&["fn-check", "--p", "5", "--k", "1", "--f", "2,1,3"], dir.path());
    assert!(good.status.success());
    let bad = povmforge(&["fn-check", "--p", "5", "--k", "1", "--f", "0,1"], dir.path());
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn libound_and_welch_pass() {
    let dir = tempfile::tempdir().unwrap();
    let out = povmforge(&["libound", "--p", "3", "--k", "1"], dir.path());
    assert!(out.status.success());
    let out = povmforge(&["welch", "--p", "2", "--k", "2"], dir.path());
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("\"n\": 25"));
}

#[test]
fn sweep_aggregates_and_continues_past_failures() {
    let dir = tempfile::tempdir().unwrap();
    let out = povmforge(
        &["sweep", "--construction", "q", "--q-list", "3,5,7"],
        dir.path(),
    );
    assert!(out.status.success());
    let csv = fs::read_to_string(dir.path().join("sweep_theorem_2_10.csv")).unwrap();
    let lines: Vec<&str> = csv.trim_end().lines().collect();
    assert_eq!(lines.len(), 1 + 3 * 4, "header plus four cases per q");
    assert!(lines.iter().skip(1).all(|l| l.ends_with(",ok")));

    // An inadmissible q is recorded in-row and the sweep keeps going.
    let out = povmforge(
        &["sweep", "--construction", "q", "--q-list", "4,3"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    let csv = fs::read_to_string(dir.path().join("sweep_theorem_2_10.csv")).unwrap();
    assert!(csv.contains("error:"));
    assert!(csv.contains("1,theorem_2_10,3,3,1.1"));
}

#[test]
fn sweep_q1_margins_hold() {
    let dir = tempfile::tempdir().unwrap();
    let out = povmforge(
        &["sweep", "--construction", "q1", "--q-list", "2,3,4"],
        dir.path(),
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("sweep_theorem_3_5.csv")).unwrap();
    let lines: Vec<&str> = csv.trim_end().lines().collect();
    assert_eq!(lines.len(), 1 + 3 * 3);
    // margin column sits at index 11.
    for line in lines.iter().skip(1) {
        let margin: f64 = line.split(',').nth(11).unwrap().parse().unwrap();
        assert!(margin >= -1e-9);
    }
}
