//! Error type shared by every module.

use alloc::string::String;
use core::fmt;

/// Errors reported by the modulus library.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Malformed graph, walk, vertex or edge reference.
    Input(String),
    /// Numeric parameter out of range (exponent, tolerance, negative density or weight).
    Parameter(String),
    /// The operation is not defined for this kind of graph.
    Unsupported(&'static str),
    /// The iteration cap was hit before the duality gap closed.
    NotConverged {
        /// Outer (or inner) iterations spent.
        iterations: usize,
        /// Best certified upper bound at the time of failure.
        primal_upper: f64,
        /// Best certified lower bound at the time of failure.
        dual_lower: f64,
    },
    /// A post-condition that holds by construction was violated.
    Internal(String),
}

/// Shorthand result type.
pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Input(msg) => write!(f, "input error: {msg}"),
            Error::Parameter(msg) => write!(f, "parameter error: {msg}"),
            Error::Unsupported(what) => write!(f, "unsupported: {what}"),
            Error::NotConverged {
                iterations,
                primal_upper,
                dual_lower,
            } => write!(
                f,
                "no convergence after {iterations} iterations (upper {primal_upper:e}, lower {dual_lower:e}, gap {:e})",
                primal_upper - dual_lower
            ),
            Error::Internal(msg) => write!(f, "internal invariant failure: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

pub(crate) fn parameter<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
