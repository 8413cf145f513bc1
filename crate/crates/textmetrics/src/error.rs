use ragrank_core::ModelId;
use thiserror::Error;

use crate::features::FeatureName;

/// Errors raised while computing, ingesting, or aggregating features.
#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("cutoff k must be at least 1")]
    ZeroCutoff,
    #[error("language detection needs at least {needed} non-whitespace characters, got {got}")]
    TextTooShort { needed: usize, got: usize },
    #[error("language detection needs at least two profiles")]
    NeedTwoProfiles,
    #[error("unknown feature name: {0}")]
    UnknownFeature(String),
    #[error("feature {0} is computed by the engine and cannot be ingested")]
    NotExternallySourced(FeatureName),
    #[error("value {value} is out of range for feature {feature}")]
    ValueOutOfRange { feature: FeatureName, value: f64 },
    #[error("feature {feature} takes whole-number scores, got {value}")]
    NonIntegerScore { feature: FeatureName, value: f64 },
    #[error("model {model} has no records for feature {feature}")]
    NoData { model: ModelId, feature: FeatureName },
    #[error("feature subset selects no features")]
    EmptySubset,
}
