use std::process::{Command, Output};

use serde_json::Value;

fn qam(args: &[&str]) -> Output {
    qam_env(args, &[])
}

fn qam_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_qam"));
    c.args(args).env_remove("QAM_THREADS");
    for (k, v) in env {
        c.env(k, v);
    }
    c.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn number(o: &Output) -> f64 {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    stdout(o).trim().parse().unwrap()
}

#[test]
fn mean_examples() {
    let m = number(&qam(&["mean", "--gen", "exp:15", "--values", "0,1", "--weights", "0.5,0.5"]));
    assert!((m - (0.5 * (1.0 + 15f64.exp())).ln() / 15.0).abs() < 1e-15);
    assert_eq!(number(&qam(&["mean", "--gen", "id", "--values", "0,1"])), 0.5);
    assert!((number(&qam(&["mean", "--gen", "expr:ln(x)", "--values", "1,4"])) - 2.0).abs() < 1e-12);
    assert!((number(&qam(&["mean", "--gen", "pow:2", "--values", "1,7"])) - 5.0).abs() < 1e-12);
    assert_eq!(number(&qam(&["mean", "--gen", "exp:3", "--values", "-2"])), -2.0);
}

/// Value column of the single data row of a CSV output.
fn csv_value(o: &Output) -> f64 {
    assert!(o.status.success());
    stdout(o).lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap()
}

#[test]
fn rho_examples() {
    let v = csv_value(&qam(&["--format", "csv", "rho", "--f", "exp:15", "--g", "exp:20", "--interval", "0,1"]));
    assert!((0.207..=0.217).contains(&v), "{v}");
    let same = qam(&["--format", "json", "rho", "--f", "exp:3", "--g", "exp:3", "--interval", "0,1"]);
    let j: Value = serde_json::from_slice(&same.stdout).unwrap();
    assert_eq!(j["rho"]["value"].as_f64(), Some(0.0));
    let v = csv_value(&qam(&["--format", "csv", "rho", "--f", "exp:0", "--g", "exp:1", "--interval", "0,1"]));
    assert!(v > 0.0 && v < 1.0);
}

#[test]
fn bounds_json_schema() {
    let o = qam(&["--format", "json", "bounds", "--f", "exp:15", "--g", "exp:20", "--interval", "0,1"]);
    assert!(o.status.success());
    let j: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(j["pair"][0], "exp:15");
    assert_eq!(j["K"].as_f64(), Some(20.0));
    assert!((j["epsilon"].as_f64().unwrap() - 5.0).abs() < 1e-12);
    for key in ["value", "arg", "gap"] {
        assert!(!j["rho"][key].is_null(), "{key}");
    }
    let bounds = j["bounds"].as_array().unwrap();
    let names: Vec<&str> = bounds.iter().map(|b| b["name"].as_str().unwrap()).collect();
    for n in ["lower_main", "lower_estim", "box_lower", "box_lower_simplified", "upper_universal_log"] {
        assert!(names.contains(&n), "{n}");
    }
    for b in bounds {
        assert!(b["applicable"].is_boolean() && b["params"].is_object());
    }
}

#[test]
fn json_floats_carry_seventeen_digits() {
    let o = qam(&["--format", "json", "rho", "--f", "exp:15", "--g", "exp:20", "--interval", "0,1"]);
    let text = stdout(&o);
    let line = text.lines().find(|l| l.contains("\"value\"")).unwrap();
    let num = line.split(':').nth(1).unwrap().trim().trim_end_matches(',');
    let mantissa = num.split('e').next().unwrap().replace('.', "");
    assert_eq!(mantissa.len(), 17, "{num}");
}

#[test]
fn output_is_byte_identical_across_runs_and_thread_counts() {
    let args = ["--format", "json", "bounds", "--f", "pow:-1", "--g", "expr:x^3 + x", "--interval", "[1,2]"];
    let a = qam_env(&args, &[("QAM_THREADS", "1")]);
    let b = qam_env(&args, &[("QAM_THREADS", "4")]);
    let c = qam(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn identical_specs_give_zero_lower_bounds() {
    let o = qam(&["--format", "json", "bounds", "--f", "pow:2", "--g", "pow:2", "--interval", "[1,2]"]);
    assert!(o.status.success());
    let j: Value = serde_json::from_slice(&o.stdout).unwrap();
    for b in j["bounds"].as_array().unwrap().iter().filter(|b| b["kind"] == "lower") {
        assert!(b["value"].as_f64().unwrap().abs() < 1e-14, "{b}");
    }
}

#[test]
fn power_pair_sandwich_exits_zero() {
    let o = qam(&["bounds", "--f", "pow:1", "--g", "pow:3", "--interval", "1,2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("holds"));
}

#[test]
fn csv_columns() {
    let o = qam(&["--format", "csv", "bounds", "--f", "exp:1", "--g", "exp:2", "--interval", "0,1"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("name,value,applicable"));
    assert!(lines.all(|l| l.split(',').count() == 3));
}

#[test]
fn table_reproduces_reference_rows() {
    let o = qam(&["table"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.trim_end().ends_with("ok")).count(), 5, "{text}");
    let j: Value = serde_json::from_slice(&qam(&["--format", "json", "table"]).stdout).unwrap();
    assert_eq!(j["pass"], true);
    assert_eq!(j["rows"].as_array().unwrap().len(), 5);
}

#[test]
fn verify_small_corpus_passes() {
    let o = qam(&["--format", "json", "verify", "--corpus", "power", "--trials", "100"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let j: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(j["suites"].as_array().unwrap().len(), 6);
}

#[test]
fn input_errors_exit_two() {
    let cases: [&[&str]; 7] = [
        &["rho", "--f", "foo", "--g", "exp:1", "--interval", "0,1"],
        &["rho", "--f", "exp:1", "--g", "exp:2", "--interval", "1,0"],
        &["rho", "--f", "expr:x^2", "--g", "exp:1", "--interval", "-1,1"],
        &["mean", "--gen", "log", "--values", "-1,2"],
        &["mean", "--gen", "id", "--values", "1,2", "--weights", "0.3,0.3"],
        &["rho", "--f", "exp:1", "--g", "exp:2", "--interval", "0,1", "--grid-n", "1"],
        &["table", "--format", "xml"],
    ];
    for args in cases {
        let o = qam(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    let o = qam_env(&["mean", "--gen", "id", "--values", "1,2"], &[("QAM_THREADS", "many")]);
    assert_eq!(o.status.code(), Some(2));
}
