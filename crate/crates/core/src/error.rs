//! Error type shared by all modules.

use thiserror::Error;

/// Everything that can go wrong in a computation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed brane-diagram text or charge list.
    #[error("parse error: {0}")]
    Parse(String),
    /// Structurally invalid input (bad margins, mismatched dimensions, bad IDs).
    #[error("invalid input: {0}")]
    Input(String),
    /// A term has a higher vanishing order in its denominator than in its numerator.
    #[error("pole in term {term}: numerator order {ord_num} < denominator order {ord_den}")]
    Pole {
        /// Index of the offending term.
        term: usize,
        /// Number of structural zeros in the numerator.
        ord_num: i64,
        /// Number of structural zeros in the denominator.
        ord_den: i64,
    },
    /// A sample point landed too close to a zero of a denominator.
    #[error("sample point too close to a singularity: {0}")]
    Resample(String),
    /// A directional limit did not stabilise.
    #[error("limit did not stabilise: {0}")]
    Limit(String),
    /// Numeric evaluation problem (q outside the disk, missing variable value).
    #[error("evaluation error: {0}")]
    Eval(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
