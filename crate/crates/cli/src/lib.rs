//! Batch driver for the `nsp` solver: config ingestion, single runs,
//! parameter sweeps, admissibility reports and plots.

// `!(x > y)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod admissible;
pub mod config;
pub mod plot;
pub mod run;
pub mod svg;
pub mod sweep;

use std::io;
use std::path::{Path, PathBuf};

pub use config::RunConfig;

/// Process exit status of a command that got as far as doing its work.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Completed = 0,
    Failed = 1,
    Blowup = 2,
}

impl Status {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("inadmissible parameters: {0} (set allow_inadmissible = true to run anyway)")]
    Inadmissible(String),
    #[error(transparent)]
    Core(#[from] nsp_core::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{0}")]
    Plot(String),
}

impl CliError {
    /// Failures before any output was produced: bad config, inadmissible
    /// parameters, unusable initial data.
    pub fn is_config_stage(&self) -> bool {
        matches!(self, CliError::Config(_) | CliError::Inadmissible(_))
    }
}

/// Prints to stdout, ignoring a closed pipe (`nsp admissible ... | head`).
pub(crate) fn print_stdout(text: &str) {
    use std::io::Write;
    let _ = writeln!(io::stdout().lock(), "{text}");
}

pub(crate) fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}
