use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const LEHMER: &str = "1 1 0 -1 -1 -1 -1 -1 0 1 1";

fn lehmer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lehmer"))
        .args(args)
        .env_remove("LEHMER_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = lehmer(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lehmer-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn mahler_of_lehmer() {
    let v = json(&["mahler", LEHMER]);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "mahler");
    let m = v["result"]["value"].as_f64().unwrap();
    assert!((m - 1.17628).abs() < 1e-4);
    assert_eq!(v["result"]["kronecker"], false);
    let text = String::from_utf8(lehmer(&["mahler", LEHMER]).stdout).unwrap();
    assert!(text.contains("1.17628"));
}

#[test]
fn mahler_of_cyclotomic_is_exactly_one() {
    let v = json(&["mahler", "1 1 1"]);
    assert_eq!(v["result"]["value"].as_f64(), Some(1.0));
    assert_eq!(v["result"]["is_one_exact"], true);
    assert_eq!(v["result"]["kronecker"], true);
}

#[test]
fn classify_quadratic() {
    let v = json(&["classify", "1 -3 1"]);
    let r = &v["result"];
    assert_eq!(r["counts"]["outside"], 1);
    assert_eq!(r["counts"]["real_outside"], 1);
    assert_eq!(r["palindromic"], true);
    assert_eq!(r["salem"]["kind"], "neither");
    assert_eq!(r["membership"]["status"], "member");
}

#[test]
fn output_is_byte_identical() {
    for args in [
        vec!["--json", "classify", LEHMER],
        vec!["--json", "construct", LEHMER, "--m", "3"],
        vec!["--json", "search", "--deg", "6", "--height", "1", "--palindromic"],
    ] {
        let a = lehmer(&args);
        let b = lehmer(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(lehmer(&["mahler", "1 x"]).status.code(), Some(1));
    assert_eq!(lehmer(&["mahler", "1 1 2"]).status.code(), Some(1));
    assert_eq!(lehmer(&["beta-n", "--n", "5", "--height", "1"]).status.code(), Some(1));
    assert_eq!(lehmer(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(lehmer(&["--help"]).status.code(), Some(0));
    assert_eq!(lehmer(&["bounds", "-1 -1 0 1"]).status.code(), Some(0));
}

#[test]
fn construct_and_adjoint() {
    let v = json(&["construct", LEHMER, "--m", "3"]);
    assert_eq!(v["result"]["witness"]["c"], 1);
    assert_eq!(v["result"]["power"], 2);
    let v = json(&["adjoint", "1 -3 1", "--n", "2"]);
    assert_eq!(v["result"]["global"], "-1 8 -8 1");
    let v = json(&["trace-poly", "1 -1 -1 -1 1"]);
    assert_eq!(v["result"]["trace_poly"], "-3 -1 1");
}

#[test]
fn search_with_plot() {
    let dir = scratch("plot");
    let path = dir.join("search.tsv");
    let out = lehmer(&[
        "search", "--deg", "4", "--height", "1", "--s", "1", "--r", "1",
        "--emit-plot", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("x^4 - x^3 - x^2 - x + 1"));
    let tsv = std::fs::read_to_string(&path).unwrap();
    let rows: Vec<&str> = tsv.lines().collect();
    assert_eq!(rows[0], "x\ty");
    assert!(rows.iter().any(|r| r.starts_with("4\t1.72208")));
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn scan_corpus_file() {
    let dir = scratch("scan");
    let path = dir.join("corpus.txt");
    std::fs::write(&path, format!("# sequence\n{LEHMER}  # Lehmer\n")).unwrap();
    let v = json(&["scan", path.to_str().unwrap(), "--m-range", "1..5"]);
    let entries = v["result"]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 5);
    // exp(1/6) > 1.17628 > exp(1/8)
    assert_eq!(entries[2]["hypothesis_met"], true);
    assert_eq!(entries[3]["hypothesis_met"], false);
    std::fs::write(&path, format!("{LEHMER}\n1 1 3 1 1\n")).unwrap();
    let out = lehmer(&["scan", path.to_str().unwrap(), "--m-range", "1..2"]);
    assert_eq!(out.status.code(), Some(1));
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn cache_directory_is_used() {
    let dir = scratch("cache");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_lehmer"))
            .args(["--json", "mahler", LEHMER])
            .env("LEHMER_CACHE_DIR", &dir)
            .output()
            .unwrap()
    };
    let a = run();
    let files: Vec<_> = std::fs::read_dir(&dir).unwrap().collect();
    assert_eq!(files.len(), 1);
    let b = run();
    assert_eq!(a.stdout, b.stdout);
    let file = files[0].as_ref().unwrap().path();
    let mut rec: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    rec["version"] = Value::from("0.0.0-stale");
    rec["result"]["value"] = Value::from(99.0);
    std::fs::write(&file, rec.to_string()).unwrap();
    let c = run();
    assert_eq!(a.stdout, c.stdout);
    let _ = std::fs::remove_dir_all(dir);
}
