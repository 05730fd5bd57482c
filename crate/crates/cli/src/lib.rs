//! Front end for the `qcoherent` library: figure-data sweeps, one-shot
//! observable queries and the verification suite.
//!
//! The binary (`qcoh`) is a thin clap wrapper around [`run_sweep`],
//! [`run_verify`] and [`query::run_query`]; everything it prints can be
//! produced from here as well.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod query;
pub mod svg;
pub mod sweep;
pub mod verify;

pub use sweep::{read_csv, run_sweep, write_csv, ObservablePoint, SweepSpec};
pub use verify::{run_verify, Suite, VerificationReport};

/// Process exit status for a verification run where some check failed.
pub const EXIT_VERIFY_FAILED: i32 = 1;
/// Process exit status for malformed arguments.
pub const EXIT_USAGE: i32 = 2;
/// Process exit status for a parameter outside a function's domain.
pub const EXIT_DOMAIN: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("numeric domain: {0}")]
    Numeric(#[from] qcoherent::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numeric(_) => EXIT_DOMAIN,
            _ => EXIT_USAGE,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Formats `x` with 17 significant digits, which round-trips any `f64`.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}
