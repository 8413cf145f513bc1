//! Error type for world construction and brute-force oracles.

use thiserror::Error;

/// Errors from synthetic-world construction and the brute-force oracles.
#[derive(Debug, Error)]
pub enum SimError {
    /// A world parameter was out of range.
    #[error("invalid world: {field} = {value} ({reason})")]
    InvalidWorld {
        /// Offending field.
        field: &'static str,
        /// Rejected value, rendered as text.
        value: String,
        /// Why it is invalid.
        reason: &'static str,
    },

    /// The grid-search strength oracle only handles tiny rosters.
    #[error("brute-force strength fit supports at most {max} models, got {n}")]
    TooManyModels {
        /// Requested roster size.
        n: usize,
        /// Supported maximum.
        max: usize,
    },

    /// The win matrix passed to the strength oracle was not square.
    #[error("win matrix is not square: row {row} has length {len}, expected {n}")]
    RaggedMatrix {
        /// Offending row index.
        row: usize,
        /// Its length.
        len: usize,
        /// Expected dimension.
        n: usize,
    },

    /// The recursive LCS oracle is exponential and refuses long inputs.
    #[error("brute-force LCS supports sequences up to length {max}, got {len}")]
    SequenceTooLong {
        /// Offending input length.
        len: usize,
        /// Supported maximum.
        max: usize,
    },

    /// Paired inputs had different lengths.
    #[error("paired inputs differ in length: {x} vs {y}")]
    LengthMismatch {
        /// Length of the first input.
        x: usize,
        /// Length of the second input.
        y: usize,
    },

    /// Rank correlation needs at least two observations.
    #[error("need at least 2 observations, got {len}")]
    TooShort {
        /// Observations provided.
        len: usize,
    },

    /// Rank correlation is undefined when one side is entirely tied.
    #[error("rank correlation undefined: all values tied on one side")]
    DegenerateRanking,
}
