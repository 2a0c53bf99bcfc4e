//! One PASS/FAIL line per criterion; exits nonzero if any criterion fails.

use std::process::ExitCode;

use flatorb::verify::{self, CRITERIA};
use flatorb_core::orbifold::BuiltinCatalog;

/// Tolerances as printed in the criteria; a change here is a change of criterion.
fn tolerances_are_pinned() -> bool {
    verify::RESIDUAL_TOLERANCE == 1e-6
        && verify::B01_TOLERANCE == 1e-9
        && verify::HEAT_TRACE_TOLERANCE == 1e-3
        && verify::HEAT_TRACE_TOLERANCE_O42 == 1e-2
        && verify::RANDOM_EIGENTYPES == 500
        && verify::BUDGETS == [1.0, 120.0, 10.0, 60.0, 10.0, 60.0, 30.0]
}

fn main() -> ExitCode {
    let pinned = tolerances_are_pinned();
    println!("{} [0] tolerances pinned", if pinned { "PASS" } else { "FAIL" });
    let mut ok = pinned;
    for criterion in CRITERIA {
        let report = criterion(&BuiltinCatalog);
        println!("{}", report.line());
        ok &= report.passed;
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
