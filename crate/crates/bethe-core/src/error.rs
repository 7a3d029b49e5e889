//! Structured errors shared across the crate.

use thiserror::Error;

/// Errors reported by the exact-arithmetic engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A denominator vanished where the formula has a genuine (non-removable) pole.
    #[error("genuine pole: {0}")]
    Pole(String),

    /// Set cardinalities do not satisfy the requirements of the requested operation.
    #[error("cardinality mismatch: {0}")]
    Cardinality(String),

    /// A parameter set contains a repeated value within one level.
    #[error("repeated value {value} within a level")]
    DuplicateInLevel {
        /// Canonical rendering of the offending value.
        value: String,
    },

    /// An index (operator row/column, level, or position) is out of range.
    #[error("index out of range: {0}")]
    Index(String),

    /// The model context is inconsistent with the request.
    #[error("invalid model: {0}")]
    Model(String),

    /// A limit does not exist (the expression diverges at the point).
    #[error("limit diverges: {0}")]
    Divergent(String),

    /// Parsing a rational or a parameter file failed.
    #[error("parse error: {0}")]
    Parse(String),

    /// A brute-force oracle request exceeds the configured size cap.
    #[error("chain too large: {0}")]
    ChainTooLarge(String),
}

impl Error {
    /// Shorthand for a pole error with a formatted location.
    pub fn pole(what: impl Into<String>) -> Self {
        Error::Pole(what.into())
    }
}
