use std::process::{Command, Output};

use serde_json::Value;

fn turan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_turan"))
        .args(args)
        .env_remove("TURAN_THREADS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn without_wall_time(out: &Output) -> Value {
    let mut v = json(out);
    v.as_object_mut().unwrap().remove("wall_time");
    v
}

#[test]
fn eval_half_order_k() {
    let out = turan(&["eval", "--nu", "0.5", "--u", "1", "--kind", "K"]);
    assert_eq!(out.status.code(), Some(0));
    let v = &json(&out)["values"][0];
    let exact = (std::f64::consts::PI / 2.0).sqrt() * (-1.0f64).exp();
    assert_eq!(v["name"], "K");
    assert!((v["value"].as_f64().unwrap() - exact).abs() < 1e-15);
    assert_eq!(format!("{:.6}", v["value"].as_f64().unwrap()), "0.461069");
}

#[test]
fn t2_scan_over_negative_orders_holds() {
    let out = turan(&[
        "turan",
        "--label",
        "t2",
        "--nu",
        "-5:5:0.25",
        "--u",
        "0.01:100:log32",
        "--verdicts",
        "none",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["status"], "ok");
    assert_eq!(r["summary"]["fails"], 0);
    assert!(r["verdicts"].as_array().unwrap().is_empty());
}

#[test]
fn t6_hunt_finds_counterexamples_and_exits_zero() {
    let out = turan(&["hunt", "--label", "t6", "--nu", "1.5:3", "--u", "1:100"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert!(!r["counterexamples"].as_array().unwrap().is_empty());
    assert_eq!(r["status"], "exploratory");
}

#[test]
fn exit_codes() {
    // A failing verdict.
    assert_eq!(
        turan(&["turan", "--label", "t6", "--nu", "2", "--u", "1"])
            .status
            .code(),
        Some(1)
    );
    // Domain and usage errors.
    let out = turan(&["eval", "--nu", "200", "--u", "1", "--kind", "K"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nu"));
    assert_eq!(
        turan(&["turan", "--label", "t4", "--nu", "0:2", "--u", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        turan(&["turan", "--label", "t9", "--nu", "1", "--u", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(turan(&["turan", "--label", "t1"]).status.code(), Some(2));
    // Below double resolution at order 1/2, decided by the oracle.
    let args = ["product", "--check", "h2-concavity", "--nu", "0.5", "--u", "100"];
    assert_eq!(turan(&args).status.code(), Some(3));
    let mut resolved = args.to_vec();
    resolved.push("--resolve");
    assert_eq!(turan(&resolved).status.code(), Some(0));
}

#[test]
fn output_is_reproducible_across_thread_counts() {
    let args = ["turan", "--label", "t1", "--nu", "(-1:3:0.25", "--u", "0.01:10:log4"];
    let a = turan(&[&args[..], &["--threads", "1"]].concat());
    let b = turan(&[&args[..], &["--threads", "3"]].concat());
    assert_eq!(without_wall_time(&a), without_wall_time(&b));
}

#[test]
fn csv_and_json_carry_the_same_rows() {
    let args = ["turan", "--label", "t6", "--nu", "(1:3:0.5", "--u", "0.1:10:log2"];
    let j = json(&turan(&args));
    let csv = turan(&[&args[..], &["--format", "csv"]].concat());
    assert_eq!(csv.status.code(), Some(1));
    let mut rdr = csv::Reader::from_reader(&csv.stdout[..]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    let verdicts = rows.iter().filter(|r| &r[0] == "verdict").count();
    let counters = rows.iter().filter(|r| &r[0] == "counterexample").count();
    assert_eq!(verdicts, j["verdicts"].as_array().unwrap().len());
    assert_eq!(counters, j["counterexamples"].as_array().unwrap().len());
    let first = rows.iter().find(|r| &r[0] == "verdict").unwrap();
    let v = &j["verdicts"][0];
    assert_eq!(first[5].parse::<f64>().unwrap(), v["slack"].as_f64().unwrap());
    assert_eq!(first[7], *v["outcome"].as_str().unwrap());
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("turan-cli-{}.json", std::process::id()));
    let out = turan(&[
        "eval",
        "--nu",
        "1",
        "--u",
        "2",
        "--kind",
        "I",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(r["command"], "eval");
}
