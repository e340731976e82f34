use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_markov-l2")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// CSV rows as header-keyed maps.
fn rows(text: &str) -> Vec<std::collections::HashMap<String, String>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
    r.records()
        .map(|rec| header.iter().cloned().zip(rec.unwrap().iter().map(String::from)).collect())
        .collect()
}

fn constant(row: &std::collections::HashMap<String, String>) -> f64 {
    row["constant"].parse().unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    ((a - b) / b).abs() <= tol
}

#[test]
fn compute_worked_examples() {
    let r = rows(&stdout(&["compute", "--weight", "laguerre", "--s", "1", "--n", "6", "--k", "2"]));
    assert!(close(constant(&r[0]), 5.235160139118, 1e-12));
    assert_eq!(r[0]["verified"], "true");
    let r = rows(&stdout(&["compute", "--weight", "jacobi", "--alpha", "-0.5", "--beta", "0.5", "--n", "6", "--k", "1"]));
    assert!(close(constant(&r[0]), 23.61080508655, 1e-11));
    let r = rows(&stdout(&["compute", "--weight", "hermite", "--n", "5", "--k", "5"]));
    assert!(close(constant(&r[0]), 2f64.powf(2.5) * 120f64.sqrt(), 1e-14));
    assert_eq!(r[0]["method"], "closed_form");
}

#[test]
fn compute_grid_and_routes() {
    let text = stdout(&["compute", "--weight", "laguerre", "--s-list", "0,-0.5", "--n-list", "3,4", "--k", "2", "--route", "b"]);
    let r = rows(&text);
    assert_eq!(r.len(), 4);
    assert_eq!((r[0]["n"].as_str(), r[0]["param1"].as_str()), ("3", "0"));
    assert_eq!((r[1]["n"].as_str(), r[1]["param1"].as_str()), ("3", "-0.5"));
    assert!(r.iter().all(|x| x["method"] == "B_route"));
}

#[test]
fn table2_preset() {
    let text = stdout(&["table", "--preset", "table2"]);
    assert!(text.starts_with("n,k,weight,param1,param2,constant,method,verified\n"));
    let r = rows(&text);
    assert_eq!(r.len(), 48);
    let cell = |n: &str, s: &str| r.iter().find(|x| x["n"] == n && x["param1"] == s).unwrap();
    assert!(close(constant(cell("10", "-0.5")), 50.14904364, 5e-10));
    assert!(close(constant(cell("100", "2")), 873.8560224, 5e-9));
    for x in &r {
        let digits = x["constant"].chars().filter(char::is_ascii_digit).collect::<String>();
        assert_eq!(digits.trim_start_matches('0').len(), 13, "{}", x["constant"]);
    }
    assert!(r.iter().all(|x| x["verified"] == "true"));
}

#[test]
fn single_cell_table_matches_compute() {
    let t = rows(&stdout(&["table", "--weight", "laguerre", "--s-list", "1", "--n-list", "7", "--k", "2"]));
    let c = rows(&stdout(&["compute", "--weight", "laguerre", "--s", "1", "--n", "7", "--k", "2"]));
    assert!(close(constant(&t[0]), constant(&c[0]), 1e-12));
    assert_eq!(t[0]["method"], c[0]["method"]);
}

#[test]
fn figure_series() {
    let f3 = rows(&stdout(&["figure-data", "--figure", "3"]));
    assert_eq!(f3.len(), 300);
    let leg6 = f3.iter().find(|x| x["param1"] == "0" && x["n"] == "6").unwrap();
    let c = rows(&stdout(&["compute", "--weight", "gegenbauer", "--alpha", "0", "--n", "6"]));
    assert!(close(constant(leg6), constant(&c[0]), 1e-12));

    let f1 = rows(&stdout(&["figure-data", "--figure", "1"]));
    assert_eq!(f1.len(), 4 * 99);
    let t10 = f1.iter().find(|x| x["n"] == "10" && x["param1"] == "0").unwrap();
    assert!(close(constant(t10), 1.0 / (2.0 * (PI / 42.0).sin()), 1e-12));
    assert!(f1.iter().all(|x| x["param1"].parse::<f64>().unwrap() > -1.0));

    let f2 = rows(&stdout(&["figure-data", "--figure", "2"]));
    let c = f2.iter().find(|x| x["n"] == "10" && x["param1"] == "1").unwrap();
    assert!(close(constant(c), 14.37588601, 5e-10));
    assert!(f2.iter().all(|x| x["param1"].parse::<f64>().unwrap() < 3.0));
}

#[test]
fn bounds_reports() {
    let r = rows(&stdout(&["bounds", "--weight", "laguerre", "--s", "0", "--n", "10"]));
    let d = r.iter().find(|x| x["source"] == "dorfler").unwrap();
    let turan = 1.0 / (2.0 * (PI / 42.0).sin());
    let (lo, hi): (f64, f64) = (d["lower"].parse().unwrap(), d["upper"].parse().unwrap());
    assert!(lo <= turan && turan <= hi);
    assert!(r.iter().all(|x| x["bracket_ok"] == "true"));

    let r = rows(&stdout(&["bounds", "--weight", "gegenbauer", "--alpha", "0", "--n", "100"]));
    let a = r.iter().find(|x| x["source"] == "bessel_gegenbauer").unwrap();
    let est: f64 = a["asymptotic"].parse().unwrap();
    assert!(close(est, constant(a), 0.1));

    let r = rows(&stdout(&["bounds", "--weight", "laguerre", "--s", "0.7", "--n", "3", "--restricted"]));
    assert_eq!(r[0]["source"], "restricted_high");
    assert!(close(constant(&r[0]), 9.0 / (6.7 * 5.7), 1e-15));
}

#[test]
fn verify_modes() {
    let r = rows(&stdout(&["verify", "--am-check", "--weight", "jacobi", "--alpha", "0", "--beta", "0", "--n", "8"]));
    let eq = r.iter().find(|x| x["check"] == "am_equality").unwrap();
    assert!(eq["value"].parse::<f64>().unwrap() <= 1e-9);
    let r = rows(&stdout(&["verify", "--rayleigh", "--weight", "hermite", "--n", "12", "--k", "3"]));
    let want = 2f64.powf(1.5) * (12.0f64 * 11.0 * 10.0).sqrt();
    assert!(close(r[0]["value"].parse().unwrap(), want, 1e-12));
    let out = run(&["verify", "--samples", "50"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = rows(&String::from_utf8(out.stdout).unwrap());
    assert!(r.len() > 100 && r.iter().all(|x| x["ok"] == "true"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["compute", "--weight", "laguerre", "--n", "3"]).status.code(), Some(2));
    assert_eq!(run(&["compute", "--weight", "laguerre", "--s", "-2", "--n", "3"]).status.code(), Some(2));
    assert_eq!(run(&["compute", "--weight", "hermite", "--n", "3", "--k", "4"]).status.code(), Some(2));
    assert_eq!(run(&["compute", "--weight", "hermite", "--s", "1", "--n", "3"]).status.code(), Some(2));
    assert_eq!(run(&["figure-data", "--figure", "4"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["table", "--preset", "table2", "--n", "4"]).status.code(), Some(2));
    let err = run(&["compute", "--weight", "laguerre", "--n", "3"]);
    assert_eq!(String::from_utf8_lossy(&err.stderr).lines().count(), 1);
}

#[test]
fn deterministic_output() {
    let a = stdout(&["figure-data", "--figure", "2"]);
    let b = stdout(&["figure-data", "--figure", "2"]);
    assert_eq!(a, b);
    let a = stdout(&["verify", "--weight", "laguerre", "--s", "0.5", "--n", "7", "--samples", "30"]);
    let b = stdout(&["verify", "--weight", "laguerre", "--s", "0.5", "--n", "7", "--samples", "30"]);
    assert_eq!(a, b);
}

#[test]
fn json_and_csv_round_trip() {
    let args = ["compute", "--weight", "jacobi", "--alpha", "0.3", "--beta", "-0.7", "--n-list", "3,9,17", "--k", "2"];
    let csv_rows = rows(&stdout(&args));
    let mut jargs = args.to_vec();
    jargs.extend(["--format", "json"]);
    let json: Value = serde_json::from_str(&stdout(&jargs)).unwrap();
    let arr = json.as_array().unwrap();
    assert_eq!(arr.len(), csv_rows.len());
    for (j, c) in arr.iter().zip(&csv_rows) {
        let keys: Vec<&str> = j.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys.len(), 8);
        assert_eq!(j["constant"].as_f64().unwrap(), constant(c));
        assert_eq!(j["param1"].as_f64().unwrap(), 0.3);
        assert_eq!(j["param2"].as_f64().unwrap(), -0.7);
        assert_eq!(j["method"].as_str().unwrap(), c["method"]);
    }
}

#[test]
fn out_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("markov-l2-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("t.csv");
    let p = path.to_str().unwrap();
    let out = run(&["compute", "--weight", "hermite", "--n", "4", "--k", "2", "--out", p]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let file = std::fs::read_to_string(&path).unwrap();
    assert_eq!(file, stdout(&["compute", "--weight", "hermite", "--n", "4", "--k", "2"]));
    std::fs::remove_dir_all(&dir).unwrap();
}
