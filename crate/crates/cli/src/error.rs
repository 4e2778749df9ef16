//! Errors of the command line front end and their exit codes.

use pmodulus_core::Error as CoreError;
use thiserror::Error;

/// Exit code for malformed input, bad flags and unsupported requests.
pub const EXIT_INPUT: i32 = 1;
/// Exit code when the solver hits its iteration cap.
pub const EXIT_NOT_CONVERGED: i32 = 2;
/// Exit code for a violated internal invariant.
pub const EXIT_INTERNAL: i32 = 3;

/// Anything that stops a command.
#[derive(Debug, Error)]
pub enum CliError {
    /// Command line that parses but does not make sense.
    #[error("usage error: {0}")]
    Usage(String),
    /// Reading the graph file failed.
    #[error("cannot read {path}: {source}")]
    Io {
        /// The file.
        path: String,
        /// Underlying error.
        source: std::io::Error,
    },
    /// Malformed graph file.
    #[error("{0}")]
    Parse(#[from] ParseError),
    /// Error reported by the library.
    #[error("{0}")]
    Core(#[from] CoreError),
    /// A checked identity or monotonicity verdict failed.
    #[error("invariant violated: {0}")]
    Invariant(String),
    /// Writing results failed.
    #[error("cannot write output: {0}")]
    Output(String),
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } | CliError::Parse(_) => EXIT_INPUT,
            CliError::Core(e) => core_exit_code(e),
            CliError::Invariant(_) | CliError::Output(_) => EXIT_INTERNAL,
        }
    }
}

/// Exit status for a library error.
pub fn core_exit_code(e: &CoreError) -> i32 {
    match e {
        CoreError::Input(_) | CoreError::Parameter(_) | CoreError::Unsupported(_) => EXIT_INPUT,
        CoreError::NotConverged { .. } => EXIT_NOT_CONVERGED,
        CoreError::Internal(_) => EXIT_INTERNAL,
    }
}

/// Graph file error with its location when one is known.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{}{message}", location_prefix(*.line, *.column))]
pub struct ParseError {
    /// 1-based line.
    pub line: Option<usize>,
    /// 1-based column.
    pub column: Option<usize>,
    /// What went wrong.
    pub message: String,
}

fn location_prefix(line: Option<usize>, column: Option<usize>) -> String {
    match (line, column) {
        (Some(l), Some(c)) => format!("line {l}, column {c}: "),
        (Some(l), None) => format!("line {l}: "),
        _ => String::new(),
    }
}

impl ParseError {
    pub(crate) fn at(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line: Some(line),
            column: None,
            message: message.into(),
        }
    }

    pub(crate) fn plain(message: impl Into<String>) -> Self {
        ParseError {
            line: None,
            column: None,
            message: message.into(),
        }
    }
}
