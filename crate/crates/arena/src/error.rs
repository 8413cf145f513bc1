//! Error type for tallying, fitting, and leaderboard construction.

use ragrank_core::ModelId;
use thiserror::Error;

/// Errors produced while tallying judgments or fitting strengths.
#[derive(Debug, Error)]
pub enum ArenaError {
    /// The judge text contained no recognizable `[[A]]`/`[[B]]`/`[[C]]` marker.
    #[error("no verdict marker found in judge output: {snippet:?}")]
    UnparseableVerdict {
        /// Leading fragment of the offending text, for diagnostics.
        snippet: String,
    },

    /// No judgments were available to fit on.
    #[error("cannot fit a model on an empty set of judgments")]
    NoJudgments,

    /// The comparison graph is disconnected: some groups of models share no
    /// judged pairs, so their relative strengths are unidentifiable.
    #[error(
        "comparison graph is disconnected: {component_a:?} and {component_b:?} \
         share no judged pairs"
    )]
    DisconnectedGraph {
        /// A model in one connected component.
        component_a: ModelId,
        /// A model in a different connected component.
        component_b: ModelId,
    },

    /// A configuration field had a value outside its valid range.
    #[error("invalid configuration: {field} = {value} ({reason})")]
    InvalidConfig {
        /// Name of the offending field.
        field: &'static str,
        /// The rejected value, rendered as text.
        value: String,
        /// Why the value is invalid.
        reason: &'static str,
    },

    /// Every bootstrap tournament failed to fit, typically because the
    /// judgment pool is so sparse that query resamples keep disconnecting
    /// the comparison graph.
    #[error("all {n_tournaments} bootstrap tournaments failed to fit")]
    AllTournamentsFailed {
        /// Number of tournaments attempted.
        n_tournaments: usize,
    },

    /// A score passed to leaderboard construction was NaN or infinite.
    #[error("non-finite score {score} for model {model}")]
    NonFiniteScore {
        /// Model with the bad score.
        model: ModelId,
        /// The offending value.
        score: f64,
    },
}
