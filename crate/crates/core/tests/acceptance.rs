//! One line per acceptance criterion; exits nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use epsolve::suite::{run_suite, SuiteConfig};

fn main() -> ExitCode {
    let cfg = SuiteConfig::default();
    let start = Instant::now();
    let report = match run_suite(&cfg) {
        Ok(r) => r,
        Err(e) => {
            println!("FAIL suite: {e}");
            return ExitCode::FAILURE;
        }
    };
    for c in &report.criteria {
        println!(
            "{} {}: {} [{}; {} checked, {} skipped]",
            if c.passed { "PASS" } else { "FAIL" },
            c.id,
            c.description,
            c.detail,
            c.checked,
            c.skipped
        );
        if let Some(ce) = &c.counterexample {
            println!("  counterexample: {ce}");
        }
    }
    println!("seed {}, {:.1}s", report.seed, start.elapsed().as_secs_f64());
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
