//! Acceptance criteria 1-10, one line each. Runs without the libtest
//! harness so the lines always reach the terminal.
//!
//! Criterion 8 contains the claim `4 nu P_nu <= (2nu - 1) P_{nu-1} +
//! (2nu + 1) P_{nu+1}`, which is false for u >= 1; that criterion is
//! reported but only required to fail in that claim alone.

use std::process::ExitCode;
use std::time::Instant;

use turan::exec::Pool;
use turan::suites::{self, Suite};

/// Criteria allowed to fail, with the check that the failure is the known one.
fn known_failure(s: &Suite) -> bool {
    if s.id != 8 {
        return false;
    }
    let other_fails = s
        .report
        .verdicts
        .iter()
        .filter(|v| v.outcome != "holds" && v.suite != "product-h2")
        .count();
    let h2_fails = s
        .report
        .verdicts
        .iter()
        .filter(|v| v.suite == "product-h2" && v.outcome == "fails")
        .count();
    other_fails == 0 && h2_fails > 0
}

fn main() -> ExitCode {
    let pool = Pool::new(None).expect("thread pool");
    let start = Instant::now();
    let suites = match suites::default_run(&pool) {
        Ok(s) => s,
        Err(e) => {
            println!("acceptance run aborted: {e}");
            return ExitCode::FAILURE;
        }
    };
    let mut bad = 0;
    for s in &suites {
        let expected = !s.pass && known_failure(s);
        println!("{}{}", s.line(), if expected { " [known false claim]" } else { "" });
        if !s.pass && !expected {
            bad += 1;
        }
    }
    println!(
        "acceptance: {} of {} criteria pass, {:.1}s on {} threads",
        suites.iter().filter(|s| s.pass).count(),
        suites.len(),
        start.elapsed().as_secs_f64(),
        pool.threads()
    );
    if bad == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
