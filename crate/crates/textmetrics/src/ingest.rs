//! Ingestion of externally computed scores.
//!
//! NLI support probabilities, reranker scores, and LLM rubric gradings are
//! produced by other systems and handed to the engine as flat records.
//! Ingestion is strict: unknown feature names, engine-computed feature
//! names, out-of-range values, and fractional Likert scores are all hard
//! errors, because a silently mangled feature column poisons every
//! downstream leaderboard.

use ragrank_core::ModelId;
use serde::{Deserialize, Serialize};

use crate::error::MetricsError;
use crate::features::{FeatureName, FeatureRecord};

/// One externally computed score, as it appears on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExternalScoreRecord {
    pub model: String,
    pub query_id: String,
    pub feature: String,
    pub value: f64,
}

/// Validates external records into typed feature records.
pub fn ingest_external_scores(
    records: &[ExternalScoreRecord],
) -> Result<Vec<FeatureRecord>, MetricsError> {
    records
        .iter()
        .map(|r| {
            let feature: FeatureName = r.feature.parse()?;
            if !feature.externally_sourced() {
                return Err(MetricsError::NotExternallySourced(feature));
            }
            let model = ModelId::new(r.model.as_str())
                .map_err(|_| MetricsError::UnknownFeature(format!("empty model in {:?}", r)))?;
            FeatureRecord::new(model, r.query_id.as_str(), feature, r.value)
        })
        .collect()
}
