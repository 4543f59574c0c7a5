//! Runs every acceptance criterion at its stated tolerance and prints one
//! PASS/FAIL line for each. Built without the libtest harness so the lines
//! are never captured.

use std::process::ExitCode;

use harmonia::suite::{self, DEFAULT_SEED};

fn main() -> ExitCode {
    let outcomes = suite::run(None, DEFAULT_SEED).expect("full selection");
    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed: Vec<u8> = outcomes.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    println!("{}/{} criteria pass", outcomes.len() - failed.len(), outcomes.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("failing criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
