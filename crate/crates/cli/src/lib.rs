//! Front end for `nonlocal-cast`: state evaluation, cloning, theorem
//! verification, parameter scans and oracle cross-checks.

pub mod args;
mod commands;
mod error;
pub mod output;

pub use commands::run;
pub use error::CliError;

/// Environment variable that fixes the worker-thread count.
pub const THREADS_ENV: &str = "NONLOCAL_CAST_THREADS";

/// Sizes the global rayon pool from [`THREADS_ENV`], if set.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV}={raw:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot size thread pool: {e}")))
}
