use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_house-edge")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let bad = run(&["kelly", "--p", "abc"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("Usage: house-edge kelly"));
    assert_eq!(run(&["roulette", "bet", "--numbers", "1,2,3,4,5,6,7"]).status.code(), Some(1));
    assert_eq!(run(&["boldplay", "--f", "1/3", "--p", "1/2"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn json_is_canonical() {
    for args in [
        vec!["craps", "dontpass", "--format", "json"],
        vec!["cdf", "solve", "--format", "json"],
        vec!["system", "sim", "--kind", "dalembert", "--p", "18/38", "--trials", "1000", "--format", "json"],
    ] {
        let s = stdout(&args);
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", s);
    }
    let v: Value = serde_json::from_str(&stdout(&["craps", "dontpass", "--format", "json"])).unwrap();
    assert_eq!(v["results"]["house_advantage"]["exact"], "27/1925");
    assert_eq!(v["provenance"]["kind"], "exact");
    let mc: Value = serde_json::from_str(&stdout(&[
        "system", "sim", "--kind", "martingale", "--p", "1/2", "--trials", "500", "--seed", "3", "--format", "json",
    ]))
    .unwrap();
    assert_eq!(mc["provenance"]["seed"], 3);
    assert_eq!(mc["provenance"]["trials"], 500);
}

#[test]
fn csv_tables() {
    let s = stdout(&["lotto", "649", "--format", "csv", "--exact"]);
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("category,probability,one_in"));
    assert_eq!(lines.next(), Some("6/6,1/13983816,13983816.0"));
    assert_eq!(s.lines().count(), 7);
}

#[test]
fn digits_and_exact() {
    let s = stdout(&["craps", "pass", "--digits", "3"]);
    assert!(s.contains("ev               -0.014\n"), "{s}");
    let s = stdout(&["craps", "pass", "--exact"]);
    assert!(s.contains("-7/495"));
}

#[test]
fn out_file_and_cache() {
    let dir = std::env::temp_dir().join(format!("house-edge-cli-test-{}", std::process::id()));
    let out = dir.join("pairs.json");
    let cache = dir.join("cache");
    std::fs::create_dir_all(&dir).unwrap();
    let args = ["holdem", "rank", "--top", "3", "--json"];
    let first = run(&[&args[..], &["--out", out.to_str().unwrap(), "--cache", cache.to_str().unwrap()]].concat());
    assert!(first.status.success());
    assert_eq!(std::fs::read(&out).unwrap(), first.stdout);
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 1);
    let second = run(&[&args[..], &["--cache", cache.to_str().unwrap()]].concat());
    assert_eq!(second.stdout, first.stdout);
    assert!(String::from_utf8_lossy(&second.stderr).contains("cached"));
    let v: Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(v["results"]["ranking"].as_array().unwrap().len(), 3);
    assert_eq!(v["results"]["ranking"][0]["hand"], "AA");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn table_commands() {
    let s = stdout(&["baccarat", "table"]);
    assert!(s.contains("3       D  D  D  D  D  D  D  D  S  D  D\n"), "{s}");
    let s = stdout(&["snackjack", "ev", "--hand", "3,3", "--up", "A", "--action", "stand", "--exact"]);
    assert!(s.contains("ev  -2/9"));
    let s = stdout(&["coherence", "--pa", "1/2", "--pab", "1/4", "--pba", "1/3", "--format", "json"]);
    let v: Value = serde_json::from_str(&s).unwrap();
    assert_eq!(v["results"]["coherent"], false);
    for row in v["results"]["settlement"].as_array().unwrap() {
        assert_eq!(row["winnings"]["exact"], "1");
    }
}
