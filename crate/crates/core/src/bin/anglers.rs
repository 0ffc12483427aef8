use std::process::ExitCode;

use anglers::cli::{run_from, EXIT_INPUT};

fn main() -> ExitCode {
    let outcome = run_from(std::env::args_os());
    if outcome.code == EXIT_INPUT {
        eprint!("{outcome}");
    } else {
        print!("{outcome}");
    }
    ExitCode::from(outcome.code as u8)
}
