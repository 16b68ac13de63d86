//! Runs every check and prints one PASS/FAIL line each. Exits nonzero if
//! any check fails.

use std::process::ExitCode;
use std::time::Instant;

use curvecount::verify::{Verifier, CHECKS};

fn main() -> ExitCode {
    let verifier = Verifier::new();
    let mut failed = 0;
    for (id, _) in CHECKS {
        let start = Instant::now();
        let result = verifier.run(id);
        println!("{result} ({:.1}s)", start.elapsed().as_secs_f64());
        failed += usize::from(!result.passed);
    }
    println!("{}", verifier.recursion_report());
    println!("acceptance: {} passed, {failed} failed", CHECKS.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
