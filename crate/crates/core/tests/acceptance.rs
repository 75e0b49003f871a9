//! One line per acceptance criterion; all checks are exact and each carries
//! its wall-clock limit. Runs without the libtest harness so the lines are
//! always printed; any failure makes the process exit non-zero.

use std::process::ExitCode;

use bgg_core::acceptance::{run_criterion, Mutation, CRITERIA};

fn main() -> ExitCode {
    let mut failures = Vec::new();
    for (id, _, _) in CRITERIA {
        let r = run_criterion(id, &Mutation::default()).unwrap();
        println!("{} [{:.2}s of {}s]", r.line(), r.elapsed.as_secs_f64(), r.limit_secs);
        if !r.pass {
            failures.push(format!("criterion {id} failed: {}", r.detail));
        } else if !r.within_limit() {
            failures.push(format!("criterion {id} took {:.2}s, limit {}s", r.elapsed.as_secs_f64(), r.limit_secs));
        }
    }

    // Planted mutations must be caught by the criteria that guard them.
    let flip = Mutation { flip_action_sign: true, ..Mutation::default() };
    let killing = Mutation { killing_scale: true, ..Mutation::default() };
    for (name, m, id) in [("flip-action-sign", &flip, 1), ("flip-action-sign", &flip, 2), ("killing-scale", &killing, 8)] {
        let r = run_criterion(id, m).unwrap();
        let caught = !r.pass;
        println!("[{}] mutation {name} caught by criterion {id}: {}", if caught { "PASS" } else { "FAIL" }, r.detail);
        if !caught {
            failures.push(format!("mutation {name} not caught by criterion {id}"));
        }
    }

    if failures.is_empty() {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        for f in &failures {
            println!("{f}");
        }
        ExitCode::FAILURE
    }
}
