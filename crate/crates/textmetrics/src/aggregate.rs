//! Macro-averaging per-query records into per-model feature vectors.

use std::collections::{BTreeMap, BTreeSet};

use ragrank_core::ModelId;

use crate::error::MetricsError;
use crate::features::{FeatureName, FeatureRecord, FeatureSubset, FeatureVector};

/// A (model, query, feature) cell that had no record and was therefore
/// left out of that model's mean.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MissingValue {
    pub model_id: ModelId,
    pub query_id: String,
    pub feature: FeatureName,
}

/// Aggregation output: one vector per requested model, plus the cells that
/// were missing from the input.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregation {
    pub vectors: Vec<FeatureVector>,
    pub missing: Vec<MissingValue>,
}

/// Averages records into one [`FeatureVector`] per model, restricted to
/// `subset`.
///
/// A model's query universe is every query it has any record for; a cell
/// missing from that universe is skipped and reported, while a model with
/// no records at all for a selected feature is an error — a mean over
/// nothing is not a feature value.
pub fn aggregate_features(
    records: &[FeatureRecord],
    models: &[ModelId],
    subset: &FeatureSubset,
) -> Result<Aggregation, MetricsError> {
    let features = subset.members();
    if features.is_empty() {
        return Err(MetricsError::EmptySubset);
    }

    // model -> query -> feature -> value (last record wins per cell)
    let mut cells: BTreeMap<&ModelId, BTreeMap<&str, BTreeMap<FeatureName, f64>>> =
        BTreeMap::new();
    for r in records {
        cells
            .entry(&r.model_id)
            .or_default()
            .entry(r.query_id.as_str())
            .or_default()
            .insert(r.feature, r.value);
    }

    let mut vectors = Vec::with_capacity(models.len());
    let mut missing = Vec::new();
    for model in models {
        let queries = cells.get(model).cloned().unwrap_or_default();
        let universe: BTreeSet<&str> = queries.keys().copied().collect();

        let mut values = BTreeMap::new();
        for &feature in &features {
            let mut sum = 0.0;
            let mut n = 0usize;
            for q in &universe {
                match queries.get(q).and_then(|fs| fs.get(&feature)) {
                    Some(v) => {
                        sum += v;
                        n += 1;
                    }
                    None => missing.push(MissingValue {
                        model_id: model.clone(),
                        query_id: (*q).to_string(),
                        feature,
                    }),
                }
            }
            if n == 0 {
                return Err(MetricsError::NoData { model: model.clone(), feature });
            }
            values.insert(feature, sum / n as f64);
        }
        vectors.push(FeatureVector {
            model_id: model.clone(),
            values,
            n_queries: universe.len(),
        });
    }
    missing.sort();

    Ok(Aggregation { vectors, missing })
}
