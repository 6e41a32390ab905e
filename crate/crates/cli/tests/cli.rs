use std::process::{Command, Output};

use serde_json::Value;

fn salie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_salie"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn hsum_example_reports_agreement() {
    let out = salie(&["hsum", "--m", "1", "--n", "1", "--r", "1", "--c", "5", "--sign", "+"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["command"], "hsum");
    assert_eq!(v["params"]["c"], 5);
    assert_eq!(v["result"]["agrees_with_closed_form"], true);
    assert_eq!(v["result"]["agrees_with_brute"], true);
    assert_eq!(v["pass"], true);
    assert!(v["err_bound"].as_f64().unwrap() < 1e-10);
    assert!(v["elapsed_ms"].is_null());
}

#[test]
fn envelope_has_the_documented_keys_only() {
    let out = salie(&[
        "petersson",
        "--k",
        "10",
        "--m",
        "1",
        "--n",
        "1",
        "--r",
        "1",
        "--c-max",
        "200",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let mut keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
    keys.sort();
    assert_eq!(
        keys,
        ["command", "elapsed_ms", "err_bound", "params", "pass", "result", "tail"]
    );
}

#[test]
fn negative_r_and_minus_sign_parse() {
    let out = salie(&["hsum", "--m", "2", "--n", "3", "--r", "-1", "--c", "9", "--sign", "-"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["params"]["r"], -1);
    assert_eq!(v["params"]["sign"], "-");
}

#[test]
fn exponents_at_the_crossover() {
    let out = salie(&["exponents", "--sigma", "21/155"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["exponent"], "-1/31");
    assert!(v["result"]["delta"].as_str().unwrap().contains('/'));
    assert!(v["result"]["regime"].is_string());
}

#[test]
fn float_sigma_is_a_usage_error() {
    let out = salie(&["exponents", "--sigma", "0.2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--sigma"));
}

#[test]
fn bad_numbers_name_the_parameter() {
    let out = salie(&["hsum", "--m", "x", "--n", "1", "--r", "1", "--c", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--m"));
}

#[test]
fn unknown_command_is_a_usage_error() {
    assert_eq!(salie(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn domain_errors_exit_2() {
    // D = r² − 4mn = 1
    assert_eq!(
        salie(&["hsum", "--m", "1", "--n", "0", "--r", "1", "--c", "5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(salie(&["exponents", "--sigma", "1/3"]).status.code(), Some(2));
    assert_eq!(
        salie(&["--threads", "0", "exponents", "--sigma", "1/5"]).status.code(),
        Some(2)
    );
}

#[test]
fn failed_check_exits_1() {
    let dir = std::env::temp_dir().join(format!("salie-dims-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("dims.txt");
    std::fs::write(&path, "k,m,dim\n10,1,0\n").unwrap();
    let out = salie(&[
        "zero-dim",
        "--k",
        "10",
        "--sample",
        "1,1",
        "--c-max",
        "500",
        "--dimensions",
        path.to_str().unwrap(),
    ]);
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], false);
}

#[test]
fn decay_csv_header() {
    let out = salie(&[
        "decay", "--m", "1", "--n", "2", "--r", "1", "--a-max", "3", "--output", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("a,t,B,abs_V_a,term_count"));
    assert!(text.lines().count() > 1);
}

#[test]
fn table_csv_and_json_agree() {
    let csv = salie(&["table", "--k", "12", "--cutoff", "3", "--output", "csv"]);
    let js = salie(&["table", "--k", "12", "--cutoff", "3"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.contains("1,1,1\n"));
    assert!(text.contains("1,0,10\n"));
    let v = json(&js);
    let rows = v["result"]["coefficients"].as_array().unwrap();
    assert_eq!(rows.len() + 1, text.lines().count());
}

#[test]
fn csv_is_refused_where_unsupported() {
    let out = salie(&["exponents", "--sigma", "1/5", "--output", "csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = [
        "petersson",
        "--k",
        "6",
        "--m",
        "1",
        "--n",
        "2",
        "--r",
        "1",
        "--c-max",
        "3000",
    ];
    let a = salie(&[&["--threads", "1"], &args[..]].concat());
    let b = salie(&[&["--threads", "3"], &args[..]].concat());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn timing_fills_elapsed() {
    let out = salie(&["--timing", "exponents", "--sigma", "0/1"]);
    assert!(json(&out)["elapsed_ms"].is_number());
}
