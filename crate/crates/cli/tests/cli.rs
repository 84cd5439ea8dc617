use std::process::{Command, Output};

use tempfile::tempdir;

fn qmem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmem")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

const SUBCLASS: &str = r#"{"family":"subclass","params":{"p":0.1,"q":0.35,"r":0.05}}"#;

#[test]
fn classify_prints_report() {
    let out = qmem(&["classify", "--channel", SUBCLASS]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["phase"], "ent_phi0");
    for key in ["theta", "phi", "entropy_bits", "holevo_bits", "correlation"] {
        assert!(v[key].is_number(), "{key}");
    }
}

#[test]
fn classify_reads_channel_file() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("ch.json");
    std::fs::write(&path, r#"{"family":"gaussian","params":{"p1":0.45,"sigma":3.0}}"#).unwrap();
    let out = qmem(&["classify", "--channel", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["phase"], "product");
}

#[test]
fn validation_errors_exit_2() {
    let out = qmem(&["classify", "--channel", "{\"family\":"]);
    assert_eq!(code(&out), 2);
    let out = qmem(&["classify", "--channel", r#"{"family":"subclass","params":{"p":0.6,"q":-0.1,"r":0.0}}"#]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("`q`"));
    assert_eq!(code(&qmem(&["scan", "--grid", "4x4"])), 2);
    assert_eq!(code(&qmem(&["scan", "--grid", "banana"])), 2);
    assert_eq!(code(&qmem(&["scan", "--grid", "16x16", "--threads", "0"])), 2);
}

#[test]
fn io_errors_exit_3() {
    let dir = tempdir().unwrap();
    let bad = dir.path().join("missing").join("out.csv");
    assert_eq!(code(&qmem(&["scan", "--grid", "16x16", "--out", bad.to_str().unwrap()])), 3);
    let missing = dir.path().join("nope.json");
    assert_eq!(code(&qmem(&["classify", "--channel", missing.to_str().unwrap()])), 3);
}

#[test]
fn scan_csv_schema() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let out = qmem(&["scan", "--grid", "128x128", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,p,q,r,phase,entropy_bits,holevo_bits,correlation"));
    let rows: Vec<_> = lines.collect();
    assert!(!rows.is_empty() && rows.len() <= 128 * 128);
    assert!(rows.iter().all(|r| r.split(',').count() == 9));
    assert!(String::from_utf8_lossy(&out.stdout).contains("points"));
}

#[test]
fn contours_with_two_levels() {
    let out = qmem(&["contours", "--grid", "64x64", "--levels", "0.43,0.5"]);
    assert_eq!(code(&out), 0);
    let docs: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let docs = docs.as_array().unwrap();
    assert_eq!(docs.len(), 2);
    assert_eq!(docs[0]["level"], 0.43);
    assert_eq!(docs[1]["level"], 0.5);

    let out = qmem(&["contours", "--grid", "64x64"]);
    let docs: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(docs[0]["level"].is_null());
    assert!(!docs[0]["polylines"].as_array().unwrap().is_empty());
}

#[test]
fn fig1_scan_is_identical_across_thread_counts() {
    let dir = tempdir().unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "4", "8"] {
        let path = dir.path().join(format!("fig1_{threads}.csv"));
        let out = qmem(&["--threads", threads, "scan", "--preset", "fig1", "--out", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0);
        outputs.push(std::fs::read(&path).unwrap());
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));

    let env = Command::new(env!("CARGO_BIN_EXE_qmem"))
        .args(["scan", "--preset", "fig1"])
        .env("QMEM_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(env.stdout, outputs[0]);
}

#[test]
fn verify_passes_and_detects_injected_fault() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = qmem(&["verify", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.len() >= 6);
    assert!(checks.iter().all(|c| c["pass"] == true && c["name"].is_string() && c["detail"].is_string()));

    let out = qmem(&["verify", "--inject-fault", "y-sign"]);
    assert_eq!(code(&out), 1);
}
