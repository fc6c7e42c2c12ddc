//! Config-driven experiment runner over `shadowlab-core`.
//!
//! `shadowlab run <config>` parses an [`ExperimentConfig`], builds the
//! system, dispatches the command, writes CSV or aligned-text reports into
//! the output directory and prints a one-paragraph summary.
//! `shadowlab describe <kind>` prints the parameter schema of a system kind.

pub mod commands;
pub mod config;
pub mod describe;
pub mod output;
pub mod system;

use std::path::PathBuf;

use thiserror::Error;

pub use commands::{run, run_file, Outcome, DISPATCH};
pub use config::ExperimentConfig;
pub use describe::describe;

/// Environment variable that replaces `[output] dir`.
pub const OUT_DIR_ENV: &str = "SHADOWLAB_OUT_DIR";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error{}: {message}", if path.is_empty() || path == "." { String::new() } else { format!(" at `{path}`") })]
    Config { path: String, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("unknown kind `{0}`; expected one of toral, perturbed-toral, jordan, linear")]
    UnknownKind(String),
    #[error("invalid system: {0}")]
    System(#[from] shadowlab_core::SystemError),
    #[error("{0}")]
    Pseudo(#[from] shadowlab_core::PseudoError),
    #[error("{0}")]
    Shadow(#[from] shadowlab_core::ShadowError),
    #[error("{0}")]
    Hyperbolicity(#[from] shadowlab_core::HyperbolicityError),
    #[error("{command}: {message}")]
    Unsupported {
        command: &'static str,
        message: String,
    },
}

impl CliError {
    pub(crate) fn unsupported(command: &'static str, message: impl Into<String>) -> Self {
        CliError::Unsupported {
            command,
            message: message.into(),
        }
    }
}
