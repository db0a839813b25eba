//! Acceptance matrix. Runs every criterion at full size; set
//! `CAUSTICS_QUICK=1` to skip the 2D scans.

use std::io::Write;
use std::process::ExitCode;

use caustics::verify::{run_criterion, Status, VerifyOptions, CRITERIA};

fn main() -> ExitCode {
    let opts = VerifyOptions {
        quick: std::env::var_os("CAUSTICS_QUICK").is_some(),
        ..Default::default()
    };
    let mut failed = 0;
    for (id, _, _) in CRITERIA {
        let r = run_criterion(id, &opts);
        println!(
            "C{:<2} {:<12} {:<30} [{:>7.1}s] {}",
            r.id,
            r.status.label(),
            r.title,
            r.seconds,
            r.detail
        );
        let _ = std::io::stdout().flush();
        if !matches!(r.status, Status::Pass | Status::Skipped) {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} of {} criteria failed",
        failed,
        CRITERIA.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
