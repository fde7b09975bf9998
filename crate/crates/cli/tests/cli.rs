use std::process::{Command, Output};

use serde_json::Value;

fn qloop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qloop"))
        .args(args)
        .env_remove("QLOOP_CACHE_DIR")
        .output()
        .expect("spawn qloop")
}

fn read_report(path: &std::path::Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn explain_known_and_unknown() {
    let out = qloop(&["explain", "id1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("id1"));

    let out = qloop(&["explain", "no-such-check"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_config_exits_2() {
    assert_eq!(qloop(&["run", "--suite", "bogus"]).status.code(), Some(2));
    assert_eq!(qloop(&["run", "--N", "1"]).status.code(), Some(2));
    assert_eq!(qloop(&["run", "--N", "2", "--Q", "2"]).status.code(), Some(2));
    let out = qloop(&["run", "--ring", "laurent", "--suite", "lemmas"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn qcomb_report_is_green() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let out = qloop(&["run", "--suite", "qcomb", "--N", "3", "--report", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));

    let doc = read_report(&report);
    assert_eq!(doc["tool"], "qloop");
    assert_eq!(doc["config"]["N"], 3);
    let checks = doc["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert_eq!(doc["summary"]["total"].as_u64().unwrap() as usize, checks.len());
    assert_eq!(doc["summary"]["nonzero"], 0);
    assert_eq!(doc["summary"]["error"], 0);
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# small run\nN=3\nL=3\nsuite=qcomb\n").unwrap();
    let report = dir.path().join("r.json");
    let out = qloop(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--N",
        "2",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = read_report(&report);
    assert_eq!(doc["config"]["N"], 2);
    assert_eq!(doc["config"]["L"], 3);
}

#[test]
fn cache_does_not_change_checks() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let mut docs = Vec::new();
    for name in ["cold.json", "warm.json"] {
        let report = dir.path().join(name);
        let out = qloop(&[
            "run",
            "--suite",
            "divpow",
            "--N",
            "2",
            "--L",
            "4",
            "--Q",
            "1",
            "--cache-dir",
            cache.to_str().unwrap(),
            "--report",
            report.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
        let mut doc = read_report(&report);
        for c in doc["checks"].as_array_mut().unwrap() {
            c["millis"] = Value::from(0);
        }
        docs.push((doc["checks"].clone(), doc["summary"].clone()));
    }
    assert_eq!(docs[0], docs[1]);
}
