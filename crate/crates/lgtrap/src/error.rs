//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A configuration document is missing a required field.
    #[error("missing field `{0}`")]
    MissingField(String),

    /// A configuration key carries an unknown unit suffix or is not recognized.
    #[error("unknown unit suffix or key `{0}`")]
    UnknownKey(String),

    /// A value that must be strictly positive is not.
    #[error("non-positive value for `{name}`: {value}")]
    NonPositive { name: &'static str, value: f64 },

    /// A value violates a domain constraint other than positivity.
    #[error("invalid value for `{name}`: {value} ({reason})")]
    InvalidValue {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// Failed to parse a configuration document.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Series or special-function evaluation outside its domain.
    #[error("divergent evaluation: {0}")]
    Divergent(String),

    /// Perturbative expansion requested outside its validity range.
    #[error("out of perturbative regime: q = {q:.4} >= {limit}")]
    OutOfRegime { q: f64, limit: f64 },

    /// An iterative solver failed to converge.
    #[error("{what} did not converge within {iterations} iterations (residual {residual:.3e})")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    /// The requested state cannot be represented (e.g. thermal cloud below Tc).
    #[error("{0}")]
    Unsupported(String),

    /// Grid too small for the requested solve.
    #[error("grid too small: {0}")]
    GridTooSmall(String),

    /// Time series did not reach the requested saturation level.
    #[error("saturation not reached: {0}")]
    SaturationNotReached(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
