use std::path::PathBuf;

use serde_json::Value;
use sunflower_cli::run;

fn tmp(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sunflower-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn sh(args: &[&str]) -> (i32, Value, String) {
    let r = run(std::iter::once("sunflower").chain(args.iter().copied()));
    let v = if r.stdout.trim_start().starts_with('{') { serde_json::from_str(&r.stdout).unwrap() } else { Value::Null };
    (r.code, v, r.stderr)
}

const K5: &str = "n 5\n0 1\n0 2\n0 3\n0 4\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n";

#[test]
fn product_then_satisfying_is_nine_sixteenths() {
    let r = run(["sunflower", "gen", "product", "--w", "2", "--m", "2"]);
    assert_eq!(r.code, 0);
    let f = tmp("p22.json", &r.stdout);
    let (code, v, _) = sh(&[
        "analyze", "satisfying", "--in", f.to_str().unwrap(), "--alpha", "1/2", "--beta", "1/2", "--method", "exact-enum",
    ]);
    assert_eq!(v["result"]["probability"]["value"]["exact"], "9/16");
    // 9/16 > 1 − 1/2, so the family is satisfying.
    assert_eq!(v["result"]["verdict"], "satisfying");
    assert_eq!(code, 0);
}

#[test]
fn below_threshold_exits_one() {
    let r = run(["sunflower", "gen", "product", "--w", "4", "--m", "1"]);
    let f = tmp("p41.json", &r.stdout);
    let (code, v, _) = sh(&["analyze", "satisfying", "--in", f.to_str().unwrap(), "--alpha", "1/2", "--beta", "1/2"]);
    assert_eq!(v["result"]["probability"]["value"]["exact"], "1/16");
    assert_eq!(code, 1);
}

#[test]
fn sunflower_on_k5_edges_verifies() {
    let f = tmp("k5.txt", K5);
    let r = run(["sunflower", "analyze", "sunflower", "--r", "3", "--in", f.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    let rep = tmp("k5-report.json", &r.stdout);
    let (code, v, _) = sh(&["analyze", "--verify", rep.to_str().unwrap(), "--in", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["verified"], true);
}

#[test]
fn tampered_witness_fails_verification() {
    let f = tmp("k5b.txt", K5);
    let r = run(["sunflower", "analyze", "sunflower", "--r", "3", "--in", f.to_str().unwrap()]);
    let mut v: Value = serde_json::from_str(&r.stdout).unwrap();
    // {0,1}, {0,2}, {1,2} is a triangle.
    v["result"]["witness"]["indices"] = serde_json::json!([0, 1, 4]);
    let rep = tmp("bad-report.json", &v.to_string());
    let (code, out, _) = sh(&["analyze", "--verify", rep.to_str().unwrap(), "--in", f.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(out["result"]["verified"], false);
}

#[test]
fn robust_single_set_exits_one() {
    let f = tmp("one.txt", "n 3\n0 1 2\n");
    let (code, v, _) = sh(&["analyze", "robust", "--in", f.to_str().unwrap(), "--alpha", "1/2", "--beta", "1/2"]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["found"], false);
}

#[test]
fn robust_witness_and_intersecting_reports_verify() {
    let f = tmp("k5c.txt", K5);
    let fs = f.to_str().unwrap();
    for args in [
        vec!["analyze", "robust", "--alpha", "1/2", "--beta", "1/2"],
        vec!["analyze", "intersecting"],
        vec!["analyze", "spread", "--kappa", "3"],
    ] {
        let mut a = args.clone();
        a.extend(["--in", fs]);
        let r = run(std::iter::once("sunflower").chain(a.iter().copied()));
        assert!(r.code <= 1, "{args:?}: {}", r.stderr);
        let rep = tmp("rep.json", &r.stdout);
        let (code, v, err) = sh(&["analyze", "--verify", rep.to_str().unwrap(), "--in", fs]);
        assert_eq!(code, 0, "{args:?}: {err} {v}");
    }
}

#[test]
fn malformed_inputs_report_positions() {
    let f = tmp("bad.txt", "n 3\n0 1\n0 x\n");
    let (code, _, err) = sh(&["analyze", "spread", "--in", f.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("bad.txt:3:3"), "{err}");

    let f = tmp("bad.json", "{\"n\": 3,\n \"sets\": [[0, 1], [0, 5]]}");
    let (code, _, err) = sh(&["analyze", "spread", "--in", f.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("sets[1][1]"), "{err}");

    let f = tmp("trunc.json", "{\"n\": 3,\n \"sets\": [[0, 1]");
    let (code, _, err) = sh(&["analyze", "spread", "--in", f.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("trunc.json:2:"), "{err}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(sh(&["gen", "product", "--w", "2"]).0, 2);
    assert_eq!(sh(&["gen", "nothing"]).0, 2);
    assert_eq!(sh(&["analyze", "satisfying", "--alpha", "1/2", "--beta", "1/2"]).0, 2);
    assert_eq!(sh(&["apps", "ajt", "--p", "4", "--matrices", "1,0;0,1"]).0, 2);
}

#[test]
fn reports_are_deterministic() {
    let strip = |s: &str| {
        let mut v: Value = serde_json::from_str(s).unwrap();
        v.as_object_mut().unwrap().remove("runtime_ms");
        v.to_string()
    };
    let f = tmp("k5d.txt", K5);
    let fs = f.to_str().unwrap();
    for args in [
        vec!["gen", "random", "--n", "9", "--count", "7", "--min-size", "2", "--max-size", "4", "--seed", "3"],
        vec!["analyze", "satisfying", "--in", fs, "--alpha", "1/3", "--beta", "1/3", "--method", "mc", "--samples", "5000"],
        vec!["experiment", "whitecover", "--in", fs, "--trials", "50"],
        vec!["experiment", "rainbow", "--in", fs, "--search", "triple", "--trials", "30"],
    ] {
        let a = run(std::iter::once("sunflower").chain(args.iter().copied()));
        let b = run(std::iter::once("sunflower").chain(args.iter().copied()));
        assert_eq!(strip(&a.stdout), strip(&b.stdout), "{args:?}");
    }
}

#[test]
fn gen_output_pipes_into_analysis() {
    let r = run(["sunflower", "gen", "random", "--n", "6", "--count", "5", "--min-size", "2", "--max-size", "2", "--distinct"]);
    assert_eq!(r.code, 0);
    let f = tmp("rand.json", &r.stdout);
    let (code, v, err) = sh(&["analyze", "intersecting", "--in", f.to_str().unwrap()]);
    assert!(code <= 1, "{err}");
    assert_eq!(v["params"]["members"], 5);
}

#[test]
fn kneser_and_ajt_commands() {
    let (code, v, _) = sh(&["apps", "kneser", "--n", "4", "--k", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["search"]["packings"], 384);
    assert_eq!(v["result"]["pi"], serde_json::json!([0, 1, 2, 4, 5, 3]));
    let (code, _, _) = sh(&["apps", "kneser", "--n", "3", "--k", "1"]);
    assert_eq!(code, 1);
    let (code, v, _) = sh(&["apps", "ajt", "--p", "3", "--matrices", "1,0;0,1|0,1;1,0"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["disjoint_pairs_yield_solutions"], true);
}

#[test]
fn schedule_accepts_power_widths() {
    let (code, v, err) = sh(&["experiment", "schedule", "--w", "2^256", "--alpha", "1/2", "--beta", "1/2"]);
    assert!(code <= 1, "{err}");
    assert_eq!(v["result"]["constraints"].as_array().unwrap().len(), 7);
}

#[test]
fn text_format_flattens() {
    let r = run(["sunflower", "gen", "product", "--w", "2", "--m", "2", "--format", "text"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("command = gen product"));
}
