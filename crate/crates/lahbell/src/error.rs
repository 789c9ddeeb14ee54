use thiserror::Error;

/// Error type shared by the whole crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Division by an exactly zero rational.
    #[error("division by zero")]
    DivisionByZero,

    /// A rational literal could not be parsed.
    #[error("invalid rational literal {literal:?}: {reason}")]
    ParseRational { literal: String, reason: String },

    /// A distribution description violates its own constraints
    /// (probability out of range, weights not summing to one, ...).
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    /// A moment of higher order than the profile holds was requested.
    /// Profiles never extrapolate.
    #[error("moment order {requested} exceeds profile order {available}")]
    MomentOrder { requested: usize, available: usize },

    /// An input sequence is shorter than the operation needs.
    #[error("{what} needs {needed} entries, got {got}")]
    NotEnoughValues {
        what: &'static str,
        needed: usize,
        got: usize,
    },

    /// The requested computation is outside the supported parameter range.
    /// The message names the guard that rejected it.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A truncated series failed to meet its tolerance within the term cap.
    #[error("series did not converge within {max_terms} terms")]
    NoConvergence { max_terms: usize },

    /// The distribution carries moments only and cannot be sampled.
    #[error("cannot sample from {0}")]
    NotSampleable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
