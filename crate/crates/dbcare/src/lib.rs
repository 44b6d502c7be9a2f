//! Cost-aware best-arm identification laboratory.
//!
//! The crate has four layers:
//!
//! * [`core`]: bandit instances, gap profiles, and the counter-based random
//!   number streams that make every simulation reproducible.
//! * [`policies`]: the DBCARE elimination policy and its baselines (fixed-gap
//!   oracle, sequential halving, racing, uniform guess), all reporting a
//!   [`policies::Trace`] of what happened in a single run.
//! * [`bounds`]: closed-form lower-bound ("hard") functions, the matching
//!   upper-bound envelopes, and independent numeric oracles that recover the
//!   closed forms by direct search.
//! * [`harness`]: seeded Monte Carlo risk estimation, declarative sweeps over
//!   instance grids, CSV emission, and SVG plots.
//!
//! Risk throughout is `penalty + c * E[tau]`, where the penalty is either the
//! misidentification indicator or the simple regret of the recommended arm,
//! and `tau` is the number of samples the policy consumed.
//!
//! With the default `parallel` feature the harness fans replications out over
//! rayon; disabling it yields a sequential build with bitwise-identical
//! output.

pub mod bounds;
pub mod core;
pub mod harness;
pub mod policies;

use std::fmt;

/// Error type shared across the crate.
///
/// Recoverable misuse (bad parameters, malformed configuration) is reported
/// as [`Error::InvalidParameter`]; file-system failures during CSV or plot
/// emission are wrapped as [`Error::Io`]. Out-of-range arm indices are logic
/// errors and panic instead.
#[derive(Debug)]
pub enum Error {
    InvalidParameter(String),
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::Io(err) => write!(f, "i/o error: {err}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::InvalidParameter(_) => None,
            Error::Io(err) => Some(err),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err)
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
