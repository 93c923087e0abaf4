//! File formats and plumbing for the `kmr` command-line tool.
//!
//! The numerics live in `kmr-core`; this crate adds CSV ingestion, warp
//! JSON serialization, and the thread-pool setup shared by the subcommands.

pub mod csv;
pub mod warpjson;

use std::fmt;

/// CLI-level failure, carrying the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad invocation or invalid option values (exit 2).
    Usage(String),
    /// The optimizer did not converge; outputs are still written (exit 3).
    NonConvergence,
    /// Unreadable, unparseable, or numerically unusable data (exit 4).
    Data(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::NonConvergence => write!(f, "optimizer did not converge"),
            CliError::Data(msg) => write!(f, "data error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::NonConvergence => 3,
            CliError::Data(_) => 4,
        }
    }
}

impl From<kmr_core::Error> for CliError {
    fn from(e: kmr_core::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

/// Initialize the global rayon pool from `KMR_THREADS` (0 or unset = auto).
/// Results never depend on the thread count; only wall time does.
pub fn init_threads() -> Result<(), CliError> {
    if let Ok(raw) = std::env::var("KMR_THREADS") {
        let n: usize = raw
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("KMR_THREADS must be an integer, got {raw:?}")))?;
        if n > 0 {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| CliError::Usage(e.to_string()))?;
        }
    }
    Ok(())
}
