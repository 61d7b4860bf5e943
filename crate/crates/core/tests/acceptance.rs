//! Runs every acceptance criterion with the default configuration and prints
//! one PASS/FAIL line each. Exits nonzero if any criterion fails.

use std::process::ExitCode;

use regsep::suites::{run_suite, suite_names, SuiteConfig};

fn main() -> ExitCode {
    let cfg = SuiteConfig::default();
    let mut failed = Vec::new();
    for (criterion, name) in suite_names() {
        let report = run_suite(name, &cfg).expect("listed suite exists");
        println!("{}", report.line());
        if !report.passed {
            println!("{}", report.detail);
            failed.push(criterion);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", suite_names().len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
