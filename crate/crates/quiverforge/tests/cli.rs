use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use tempfile::TempDir;

const LOUISE6: &str = r#"{"n":6,"arrows":[[1,2,2],[2,3,1],[2,4,1],[3,1,1],[3,4,1],[4,1,1],[4,5,1],[5,3,1],[6,5,1]]}"#;
const PATH3: &str = r#"{"n":3,"arrows":[[1,2,1],[2,3,1]]}"#;
const CYCLE3: &str = r#"{"n":3,"arrows":[[1,2,1],[2,3,1],[3,1,1]]}"#;
const MARKOV: &str = r#"{"n":3,"arrows":[[1,2,2],[2,3,2],[3,1,2]]}"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_quiverforge"))
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn analyze_finds_the_lone_covering_pair() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "louise6.json", LOUISE6);
    let out = run(&["analyze", arg(&f)]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["covering_pairs"], serde_json::json!([[6, 5]]));
    assert_eq!(v["cycle_vertices"], serde_json::json!([1, 2, 3, 4, 5]));
    assert_eq!(v["acyclic"], false);
}

#[test]
fn double_mutation_echoes_the_input() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "p3.json", PATH3);
    let out = run(&["mutate", arg(&f), "-k", "2", "-k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), PATH3);
    let once = run(&["mutate", arg(&f), "-w", "2"]);
    let v = stdout_json(&once);
    assert_eq!(v["arrows"], serde_json::json!([[1, 3, 1], [2, 1, 1], [3, 2, 1]]));
}

#[test]
fn stdin_is_read_for_dash() {
    let mut child = bin().args(["canon", "-"]).stdin(Stdio::piped()).stdout(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(CYCLE3.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["quiver"]["n"], 3);
    assert_eq!(v["relabel"].as_array().unwrap().len(), 3);
}

#[test]
fn certify_an_acyclic_quiver_as_banff() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "acyclic.json", PATH3);
    let out = run(&["certify", arg(&f), "--class", "banff"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["class"], "banff");
    assert_eq!(v["verdict"], "certified");
    assert_eq!(v["witness"]["kind"], "base_acyclic");
}

#[test]
fn certify_then_checkcert_round_trips() {
    let dir = TempDir::new().unwrap();
    let q = write(&dir, "c3.json", CYCLE3);
    for class in ["banff", "bprime", "louise", "lprime", "pprime"] {
        let out = run(&["certify", arg(&q), "--class", class]);
        assert_eq!(out.status.code(), Some(0), "{class}");
        let cert = write(&dir, &format!("{class}.json"), std::str::from_utf8(&out.stdout).unwrap());
        let check = run(&["checkcert", arg(&q), arg(&cert)]);
        assert_eq!(check.status.code(), Some(0), "{class}");
        let v = stdout_json(&check);
        assert_eq!((v["class"].as_str(), v["valid"].as_bool()), (Some(class), Some(true)));
    }
}

#[test]
fn checkcert_rejects_a_wrong_certificate() {
    let dir = TempDir::new().unwrap();
    let q = write(&dir, "c3.json", CYCLE3);
    let cert = write(&dir, "cert.json", r#"{"kind":"base_no_arrows"}"#);
    let out = run(&["checkcert", arg(&q), arg(&cert), "--class", "bprime"]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["valid"], false);
    assert!(v["reason"].as_str().unwrap().contains("arrow"));
}

#[test]
fn refuted_and_unknown_verdicts_set_the_exit_code() {
    let dir = TempDir::new().unwrap();
    let markov = write(&dir, "markov.json", MARKOV);
    let out = run(&["certify", arg(&markov), "--class", "banff"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["verdict"], "refuted_exhaustive");

    // a 4-cycle of double arrows has an infinite class with growing entries
    let wild = write(&dir, "wild.json", r#"{"n":4,"arrows":[[1,2,2],[2,3,2],[3,4,2],[4,1,2]]}"#);
    let out = run(&["certify", arg(&wild), "--class", "banff", "--max-classes", "200"]);
    assert_eq!(out.status.code(), Some(3));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "unknown");
    assert!(v["reason"].is_string());
}

#[test]
fn transform_produces_checkable_certificates() {
    let dir = TempDir::new().unwrap();
    let q = write(&dir, "c3.json", CYCLE3);
    let out = run(&["certify", arg(&q), "--class", "banff"]);
    let banff = write(&dir, "banff.json", std::str::from_utf8(&out.stdout).unwrap());
    for to in ["bprime", "pprime"] {
        let out = run(&["transform", arg(&q), arg(&banff), "--to", to]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let v = stdout_json(&out);
        assert_eq!(v["from"], "banff");
        let cert = write(&dir, "out.json", &v["certificate"].to_string());
        let check = run(&["checkcert", arg(&q), arg(&cert), "--class", to]);
        assert_eq!(check.status.code(), Some(0));
    }
    let out = run(&["transform", arg(&q), arg(&banff), "--to", "lprime"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn search_reports_the_class() {
    let dir = TempDir::new().unwrap();
    let q = write(&dir, "markov.json", MARKOV);
    let out = run(&["search", arg(&q), "--max-classes", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["exhausted"], true);
    assert_eq!(v["representatives"].as_array().unwrap().len(), 1);
}

#[test]
fn scan_surfaces_its_seed() {
    let out = run(&["scan", "--n", "6", "--seed", "11", "--count", "2", "--max-mult", "1", "--max-classes", "200"]);
    assert!(matches!(out.status.code(), Some(0) | Some(1)));
    let v = stdout_json(&out);
    assert_eq!(v["source"]["mode"], "sample");
    assert_eq!(v["source"]["seed"], 11);
    assert_eq!(v["examined"], 2);
}

#[test]
fn usage_and_input_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["analyze"]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "/definitely/not/here.json"]).status.code(), Some(2));
    let bad = write(&dir, "bad.json", "{\"n\": 2,");
    assert_eq!(run(&["analyze", arg(&bad)]).status.code(), Some(2));
    let two_cycle = write(&dir, "two.json", r#"{"n":2,"arrows":[[1,2,1],[2,1,1]]}"#);
    let out = run(&["analyze", arg(&two_cycle)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    let q = write(&dir, "p3.json", PATH3);
    assert_eq!(run(&["mutate", arg(&q), "-k", "9"]).status.code(), Some(2));
    assert_eq!(run(&["search", arg(&q), "--max-classes", "0"]).status.code(), Some(2));
    assert_eq!(run(&["certify", arg(&q), "--class", "nope"]).status.code(), Some(2));
}
