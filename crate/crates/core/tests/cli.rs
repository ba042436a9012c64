use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn symcap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symcap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_lines(out: &[u8]) -> Vec<Value> {
    String::from_utf8_lossy(out)
        .lines()
        .map(|l| serde_json::from_str(l).expect("json line"))
        .collect()
}

#[test]
fn alpha_reports_certificates() {
    let out = symcap(&["alpha", "--graph", "c5", "--k", "1..4"]);
    assert_eq!(out.status.code(), Some(0));
    let lines = json_lines(&out.stdout);
    assert_eq!(lines.len(), 4);
    for (i, v) in lines.iter().enumerate() {
        let k = i as u64 + 1;
        assert_eq!(v["k"], k);
        assert_eq!(v["alpha"], k + 1);
        assert_eq!(v["optimal"], true);
        assert_eq!(v["certificate"].as_array().unwrap().len() as u64, k + 1);
        assert!(v["nodes"].is_u64() && v["elapsed_ms"].is_u64());
    }
}

#[test]
fn budget_exhaustion_exits_two() {
    let out = symcap(&["alpha", "--graph", "c5", "--k", "8", "--max-nodes", "50"]);
    assert_eq!(out.status.code(), Some(2));
    let v = &json_lines(&out.stdout)[0];
    assert_eq!(v["optimal"], false);
    assert!(v["alpha"].as_u64().unwrap() >= 1);
}

#[test]
fn bounds_csv_table() {
    let out = symcap(&["bounds", "--graph", "c5", "--k", "1..3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "k,lower,alpha,optimal,upper_c5,upper_theta,ratio");
    // lower = C(k+1,1), upper_c5 = floor(5 C(k+2,2) / (k+5)), upper_theta = C(k+2,2)
    assert!(rows[1].starts_with("1,2,2,true,2,3,"));
    assert!(rows[2].starts_with("2,3,3,true,4,6,"));
    assert!(rows[3].starts_with("3,4,4,true,6,10,"));
}

#[test]
fn bounds_json_leaves_c5_bound_out_elsewhere() {
    let out = symcap(&["bounds", "--graph", "p3", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = &json_lines(&out.stdout)[0];
    assert_eq!(v["upper_c5"], Value::Null);
    assert_eq!(v["lower"], 3);
}

#[test]
fn verify_c5_passes_and_detects_faults() {
    let out = symcap(&["verify-c5", "--k", "0..3"]);
    assert_eq!(out.status.code(), Some(0));
    let lines = json_lines(&out.stdout);
    assert!(lines.iter().all(|v| v["ok"] == true));
    let checks: Vec<&str> = lines[..6]
        .iter()
        .map(|v| v["check"].as_str().unwrap())
        .collect();
    assert_eq!(
        checks,
        [
            "counting",
            "cardinality",
            "midpoint",
            "disjointness",
            "chunks",
            "prop1"
        ]
    );

    let out = symcap(&["verify-c5", "--k", "2", "--inject-fault"]);
    assert_eq!(out.status.code(), Some(3));
    let bad: Vec<Value> = json_lines(&out.stdout)
        .into_iter()
        .filter(|v| v["ok"] == false)
        .collect();
    assert_eq!(bad.len(), 1);
    assert_eq!(bad[0]["check"], "midpoint");

    assert_eq!(symcap(&["verify-c5", "--k", "20"]).status.code(), Some(1));
}

#[test]
fn search_is_reproducible() {
    let a = symcap(&["search", "--k", "4..5", "--seed", "3", "--iterations", "50"]);
    let b = symcap(&["search", "--k", "4..5", "--seed", "3", "--iterations", "50"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    for v in json_lines(&a.stdout) {
        let k = v["k"].as_u64().unwrap();
        assert_eq!(v["baseline"], k + 1);
        assert!(v["size"].as_u64().unwrap() > k);
        assert_eq!(v["notable"], false);
    }
    let zero = symcap(&["search", "--k", "3", "--iterations", "0"]);
    assert_eq!(zero.status.code(), Some(1));
}

#[test]
fn oracle_check_default_suite() {
    let out = symcap(&["oracle-check"]);
    assert_eq!(out.status.code(), Some(0));
    let v = &json_lines(&out.stdout)[0];
    assert_eq!(v["ok"], true);
    // 1 + 2 + 8 + 64 labeled graphs on 1..4 vertices, four k each, plus C5
    assert_eq!(v["instances"], (1 + 2 + 8 + 64) * 4 + 4);
}

#[test]
fn out_file_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("runs.jsonl");
    let p = path.to_str().unwrap();
    assert_eq!(
        symcap(&["alpha", "--k", "1..2", "--out", p]).status.code(),
        Some(0)
    );
    let out = symcap(&["alpha", "--k", "1..3", "--out", p]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("skipping k=1"));
    let lines = json_lines(&std::fs::read(&path).unwrap());
    let ks: Vec<u64> = lines.iter().map(|v| v["k"].as_u64().unwrap()).collect();
    assert_eq!(ks, [1, 2, 3]);
}

#[test]
fn graph_files_and_input_errors() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "3 2\n0 1\n1 2").unwrap();
    let out = symcap(&[
        "alpha",
        "--graph",
        file.path().to_str().unwrap(),
        "--k",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_lines(&out.stdout)[0]["alpha"], 3);

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "3 1\n0 7").unwrap();
    let out = symcap(&["alpha", "--graph", bad.path().to_str().unwrap(), "--k", "1"]);
    assert_eq!(out.status.code(), Some(1));

    assert_eq!(
        symcap(&["alpha", "--graph", "nope", "--k", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(symcap(&["alpha", "--k", "3..1"]).status.code(), Some(1));
    assert_eq!(symcap(&["alpha", "--bogus"]).status.code(), Some(1));
    assert_eq!(symcap(&["--help"]).status.code(), Some(0));
}
