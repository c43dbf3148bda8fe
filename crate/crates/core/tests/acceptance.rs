use std::process::ExitCode;

use opnorm_core::verify::run_all;

fn main() -> ExitCode {
    let results = run_all();
    let mut failed = 0;
    for r in &results {
        let tag = if r.passed { "PASS" } else { "FAIL" };
        println!(
            "[{tag}] {:>2} {:<24} {:>7.2}s/{:>4}s  {}",
            r.id, r.name, r.elapsed_secs, r.budget_secs, r.detail
        );
        failed += usize::from(!r.passed);
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
