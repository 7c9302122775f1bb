//! Scoreboard of the acceptance criteria. Runs without the libtest harness
//! so the lines are always printed.

use std::process::ExitCode;

use recex_core::selftest::{run, Config, CRITERIA};

fn main() -> ExitCode {
    let filter = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let outcomes = run(&Config::default(), filter.as_deref());
    for o in &outcomes {
        println!("{}", o.line());
    }
    let passed = outcomes.iter().filter(|o| o.passed()).count();
    println!("acceptance: {passed}/{} criteria passed", outcomes.len());
    if filter.is_none() && outcomes.len() != CRITERIA.len() {
        return ExitCode::FAILURE;
    }
    if passed == outcomes.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
