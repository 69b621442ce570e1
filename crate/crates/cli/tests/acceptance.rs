//! One PASS/FAIL line per acceptance criterion, computed by the `verify-all` binary.

use std::process::{Command, ExitCode};

use serde_json::Value;

fn verify_all() -> (Vec<u8>, Option<i32>) {
    let out = Command::new(env!("CARGO_BIN_EXE_blowsplit")).args(["verify-all", "--format", "json"]).output().expect("binary runs");
    (out.stdout, out.status.code())
}

fn main() -> ExitCode {
    let (first, code) = verify_all();
    let (second, _) = verify_all();
    let report: Value = match serde_json::from_slice(&first) {
        Ok(v) => v,
        Err(e) => {
            println!("FAIL verify-all produced no report: {e}");
            return ExitCode::FAILURE;
        }
    };
    println!(
        "acceptance: cutoff {}, seed {}, hh length {}",
        report["config"]["cutoff"], report["config"]["seed"], report["config"]["hh_length"]
    );
    let mut failed = 0;
    let criteria = report["criteria"].as_array().cloned().unwrap_or_default();
    for c in &criteria {
        let id = c["id"].as_u64().unwrap_or(0);
        let mut passed = c["passed"].as_bool().unwrap_or(false);
        let mut detail = c["detail"].as_str().unwrap_or("").to_string();
        if id == 13 && first != second {
            passed = false;
            detail = "two verify-all invocations differ".into();
        }
        if !passed {
            failed += 1;
        }
        println!("{} criterion {id:>2} ({}): {detail}", if passed { "PASS" } else { "FAIL" }, c["name"].as_str().unwrap_or(""));
    }
    if criteria.len() != 13 {
        println!("FAIL expected 13 criteria, got {}", criteria.len());
        failed += 1;
    }
    let all = failed == 0;
    if all != (code == Some(0)) {
        println!("FAIL exit code {code:?} disagrees with the report");
        failed += 1;
    }
    println!("{}/{} criteria passed", criteria.len() - failed.min(criteria.len()), criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
