use std::io::Write;
use std::process::ExitCode;

use apportion_cli::app::{run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let outcome = run(Cli::parse());
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(outcome.code as u8)
}
