//! Checks a fixture directory against the corpus invariants.
//!
//! `cargo run -p oqb-core --example verify_fixtures [DIR]`

use std::path::PathBuf;
use std::process::ExitCode;

use oqb_core::fixtures;

fn main() -> ExitCode {
    let dir = std::env::args_os().nth(1).map(PathBuf::from).unwrap_or_else(fixtures::fixture_dir);
    let violations = fixtures::verify(&dir);
    for v in &violations {
        eprintln!("{v}");
    }
    if violations.is_empty() {
        println!("{}: all fixture invariants hold", dir.display());
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
