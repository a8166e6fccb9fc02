//! Runs every acceptance criterion at its pinned tolerance and prints one
//! PASS/FAIL line each.
//!
//! Two criteria are known not to hold for this model at desk scale; their
//! analysis lives with the project's decision notes. They still print FAIL.
//! The target fails if any other criterion fails, so a regression cannot
//! hide behind them.

use std::process::ExitCode;
use std::time::Instant;

use ris_sense::validation::{run_criterion, ValidationContext};

/// Table entries whose closed forms are large-M, large-N asymptotes (5), and the
/// empirical minimum landing one element below `M_inf` at c = 0.005 (9).
const KNOWN_FAILURES: [u8; 2] = [5, 9];

fn main() -> ExitCode {
    let ctx = ValidationContext::default();
    let mut unexpected = Vec::new();
    for id in 1..=11u8 {
        let t = Instant::now();
        let report = run_criterion(id, &ctx);
        println!("{report}  ({:.1} s)", t.elapsed().as_secs_f64());
        let known = KNOWN_FAILURES.contains(&id);
        match (report.passed, known) {
            (false, false) => unexpected.push(id),
            (true, true) => {
                println!("  note: criterion {id} now passes; drop it from KNOWN_FAILURES")
            }
            _ => {}
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: all criteria outside {KNOWN_FAILURES:?} pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected failures {unexpected:?}");
        ExitCode::FAILURE
    }
}
