//! Batch front end for `selfsim-core`: every command writes its artifacts
//! and a `manifest.json` into the output directory.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;

pub use commands::{run, run_with, Outcome};
pub use config::{Command, RunConfig, Target};
pub use error::CliError;

/// Exit status for a completed run whose invariants all held.
pub const EXIT_OK: i32 = 0;
/// Exit status for a completed run with a failed invariant.
pub const EXIT_INVARIANT: i32 = 1;
/// Exit status for bad arguments or unreadable inputs.
pub const EXIT_USAGE: i32 = 2;

/// Reads `SELFSIM_THREADS` and sizes the global worker pool.
pub fn configure_threads(value: Option<&str>) -> Result<(), CliError> {
    let Some(value) = value else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("SELFSIM_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}
