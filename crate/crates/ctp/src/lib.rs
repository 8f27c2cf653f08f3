//! Command-line front end, JSON certificates, text formats and a parallel
//! minor sweep on top of `ctp-core`.

pub mod certificate;
pub mod cli;
pub mod sweep;
pub mod text;

/// Errors surfaced by the command-line tool.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] ctp_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Usage(String),
}
