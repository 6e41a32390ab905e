//! Acceptance criteria 1–10 at their pinned tolerances.
//!
//! Runs without the libtest harness so the per-criterion lines always reach
//! stdout: `cargo test -p salie-cli --test acceptance`.

use std::process::Command;
use std::time::Instant;

use salie_core::verify::{run_suite, Suite, VerifyConfig};

fn verify_all(threads: &str) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_salie"))
        .args(["--threads", threads, "verify", "--suite", "all"])
        .output()
        .expect("binary runs");
    assert!(out.status.code().is_some(), "verify terminated by a signal");
    out.stdout
}

fn main() {
    let cfg = VerifyConfig::default();
    let mut failed = Vec::new();
    for suite in Suite::ALL {
        let start = Instant::now();
        let report = run_suite(suite, &cfg).expect("suite runs");
        println!(
            "criterion {:>2} {:<18} {}  ({} cases, {} failures, {:.2} s)",
            report.criterion,
            report.suite,
            if report.pass { "PASS" } else { "FAIL" },
            report.cases,
            report.failures,
            start.elapsed().as_secs_f64()
        );
        if !report.pass {
            failed.push(report.criterion);
        }
    }

    let start = Instant::now();
    let one = verify_all("1");
    let four = verify_all("4");
    let deterministic = !one.is_empty() && one == four;
    println!(
        "criterion 10 {:<18} {}  (threads 1 vs 4, {} bytes, {:.2} s)",
        "determinism",
        if deterministic { "PASS" } else { "FAIL" },
        one.len(),
        start.elapsed().as_secs_f64()
    );
    if !deterministic {
        failed.push(10);
    }

    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
