//! Error type for dataset assembly, model training, and evaluation.

use ragrank_core::ModelId;
use ragrank_textmetrics::FeatureName;
use thiserror::Error;

/// Errors from surrogate training and evaluation.
#[derive(Debug, Error)]
pub enum SurrogateError {
    /// No rows were left to train on.
    #[error("training set is empty after applying the holdout split")]
    EmptyTrainingSet,

    /// A model appeared more than once among the feature vectors.
    #[error("duplicate feature vector for model {model}")]
    DuplicateModel {
        /// The repeated model.
        model: ModelId,
    },

    /// A model's feature vector lacks one of the selected features.
    #[error("model {model} is missing feature {feature}")]
    MissingFeature {
        /// Affected model.
        model: ModelId,
        /// The absent feature.
        feature: FeatureName,
    },

    /// A model has features but no target logit.
    #[error("no target logit for model {model}")]
    MissingTarget {
        /// Affected model.
        model: ModelId,
    },

    /// A feature value or target was NaN or infinite.
    #[error("non-finite value for model {model}")]
    NonFiniteValue {
        /// Affected model.
        model: ModelId,
    },

    /// A holdout model has no feature vector to be evaluated on.
    #[error("holdout model {model} has no feature vector")]
    HoldoutNotFound {
        /// The missing model.
        model: ModelId,
    },

    /// A hyperparameter was out of range.
    #[error("invalid hyperparameter: {field} = {value} ({reason})")]
    InvalidHyper {
        /// Offending field.
        field: &'static str,
        /// Rejected value, rendered as text.
        value: String,
        /// Why it is invalid.
        reason: &'static str,
    },

    /// An input row had the wrong number of features.
    #[error("expected {expected} features, got {got}")]
    DimensionMismatch {
        /// Features the model was trained on.
        expected: usize,
        /// Features provided.
        got: usize,
    },

    /// Paired inputs had different lengths.
    #[error("paired inputs differ in length: {x} vs {y}")]
    LengthMismatch {
        /// Length of the first input.
        x: usize,
        /// Length of the second input.
        y: usize,
    },

    /// A statistic needs at least two observations.
    #[error("need at least 2 observations, got {len}")]
    TooShort {
        /// Observations provided.
        len: usize,
    },

    /// Rank correlation is undefined when one side is entirely tied.
    #[error("rank correlation undefined: all values tied on one side")]
    DegenerateRanking,

    /// Coefficient of determination is undefined for a constant target.
    #[error("coefficient of determination undefined: target values are all equal")]
    ConstantTarget,

    /// The linear system could not be solved even with ridge damping.
    #[error("design matrix is singular; cannot fit a linear model")]
    DegenerateDesign,

    /// A statistic input contained NaN or infinity.
    #[error("input contains a non-finite value")]
    NonFiniteInput,

    /// A serialized forest had an unsupported format version.
    #[error("unsupported forest format version {found} (supported: {supported})")]
    UnsupportedFormatVersion {
        /// Version found in the file.
        found: u32,
        /// Version this build reads and writes.
        supported: u32,
    },

    /// A serialized forest failed to parse at all.
    #[error("malformed forest file: {0}")]
    MalformedForestFile(#[from] serde_json::Error),

    /// Ranking the predicted scores failed.
    #[error("could not rank predictions: {0}")]
    Ranking(#[from] ragrank_arena::ArenaError),
}
