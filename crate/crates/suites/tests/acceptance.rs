//! One line per acceptance criterion; exits nonzero if any fails.
//! `MINC_SUITES=flatness,gfp` restricts the run.

use std::process::ExitCode;
use std::time::Instant;

fn main() -> ExitCode {
    let only = std::env::var("MINC_SUITES").ok();
    let mut ok = true;
    for name in minc_suites::SUITES {
        if only
            .as_deref()
            .is_some_and(|s| !s.split(',').any(|x| x == name))
        {
            continue;
        }
        let start = Instant::now();
        let report = minc_suites::run_suite(name).expect("known suite");
        println!("{report}\n    ({:.1}s)", start.elapsed().as_secs_f64());
        ok &= report.passed();
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
