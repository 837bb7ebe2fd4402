use std::process::ExitCode;

use clap::Parser;

use selfsim::cli::Cli;
use selfsim::{configure_threads, run, EXIT_INVARIANT, EXIT_OK, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = std::env::var("SELFSIM_THREADS").ok();
    let status = configure_threads(threads.as_deref())
        .and_then(|()| cli.into_config())
        .and_then(|config| run(&config));
    let code = match status {
        Ok(outcome) if outcome.passed => {
            println!("{}", outcome.summary);
            EXIT_OK
        }
        Ok(outcome) => {
            eprintln!("invariant failure: {}", outcome.summary);
            EXIT_INVARIANT
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    };
    ExitCode::from(code as u8)
}
