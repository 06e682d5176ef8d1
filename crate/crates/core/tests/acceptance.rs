use std::process::ExitCode;

use aecodes_core::reproduce::{run_criterion, CRITERIA};

fn main() -> ExitCode {
    let mut failed = 0;
    for (id, _) in CRITERIA {
        let r = run_criterion(id);
        let status = if r.pass { "PASS" } else { "FAIL" };
        println!("{status} {:>2} {} ({:.1}s): {}", r.id, r.name, r.seconds, r.detail);
        if !r.pass {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
