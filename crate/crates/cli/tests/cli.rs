use std::process::{Command, Output};

fn vosa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vosa")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let out = vosa(&a);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn all_pass(v: &serde_json::Value) -> bool {
    v["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass")
}

#[test]
fn characters_pass() {
    for args in [
        ["character", "vfer", "--d", "2", "--T", "4"],
        ["character", "msigma", "--d", "2", "--T", "4"],
        ["character", "mg", "--k", "2", "--T", "3"],
        ["character", "vl", "--T", "4", "--window", "1"],
        ["character", "mpm", "--T", "3", "--window", "1"],
    ] {
        let v = json(&args);
        assert!(all_pass(&v), "{:?}: {}", args, v);
    }
}

#[test]
fn text_lines() {
    let out = vosa(&["character", "vl", "--T", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("PASS matches f(q)^2")), "{}", text);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["character", "msigma", "--d", "0"],
        vec!["character", "mg", "--k", "3"],
        vec!["evidence", "1", "--k", "3"],
        vec!["evidence", "3"],
        vec!["verify", "tau", "--cyclotomic-order", "12"],
        vec!["character", "vfer", "--T", "-1"],
        vec!["frobnicate"],
    ] {
        let out = vosa(&args);
        assert_eq!(out.status.code(), Some(2), "{:?}", args);
    }
    let out = vosa(&["evidence", "1", "--k", "3"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("odd k out of scope"));
}

#[test]
fn json_is_sorted_and_deterministic() {
    let args = ["verify", "tau", "--bound", "4", "--format", "json"];
    let a = vosa(&args);
    let b = vosa(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert_eq!(v["config"]["bound"], 4);
    assert_eq!(v["config"]["command"], "verify tau");
    // byte order of the raw text must already be sorted
    let raw = String::from_utf8(a.stdout).unwrap();
    assert!(raw.find("\"checks\"").unwrap() < raw.find("\"config\"").unwrap());
}

#[test]
fn verify_suites_pass() {
    for args in [
        vec!["verify", "tau", "--bound", "4"],
        vec!["verify", "transport", "--W", "2"],
        vec!["verify", "phi", "--W", "3/2", "--window", "2"],
        vec!["verify", "virasoro", "--W", "1", "--window", "2"],
        vec!["verify", "jacobi", "--window", "1"],
        vec!["verify", "parity-stability", "--W", "1", "--window", "1"],
    ] {
        let v = json(&args);
        assert!(all_pass(&v), "{:?}: {}", args, v);
    }
}

#[test]
fn evidence_reports_status() {
    for c in ["1", "2"] {
        let v = json(&["evidence", c, "--k", "2"]);
        assert_eq!(v["status"], "evidence-consistent", "{}", v);
    }
}

#[test]
fn out_file() {
    let dir = std::env::temp_dir().join(format!("vosa-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.json");
    let out = vosa(&["character", "vfer", "--T", "3", "--format", "json", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(all_pass(&v));
    std::fs::remove_dir_all(&dir).unwrap();
}
