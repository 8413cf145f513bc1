//! Training-set assembly: aligning features with targets and carving out a
//! holdout split.

use crate::SurrogateError;
use ragrank_core::ModelId;
use ragrank_textmetrics::{FeatureName, FeatureSubset, FeatureVector};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// One model's features and target logit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingRow {
    /// The model the row describes.
    pub model_id: ModelId,
    /// Dense feature values, aligned with the set's `feature_names`.
    pub features: Vec<f64>,
    /// Strength logit the surrogate should predict.
    pub target: f64,
}

/// Aligned training and holdout rows over a fixed feature order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingSet {
    /// Feature order every row follows.
    pub feature_names: Vec<FeatureName>,
    /// Rows the model may learn from.
    pub train: Vec<TrainingRow>,
    /// Rows reserved for evaluation; never seen during training.
    pub holdout: Vec<TrainingRow>,
}

/// Which models to hold out of training for honest evaluation.
///
/// The default holds out one mid-weight and one heavyweight model, exercising
/// the surrogate at both ends of the strength scale.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HoldoutProtocol {
    /// Models excluded from training.
    pub models: BTreeSet<ModelId>,
}

impl HoldoutProtocol {
    /// Holds out exactly the given models.
    pub fn of(models: impl IntoIterator<Item = ModelId>) -> Self {
        Self {
            models: models.into_iter().collect(),
        }
    }

    /// Holds out nothing: every model trains.
    pub fn none() -> Self {
        Self {
            models: BTreeSet::new(),
        }
    }
}

impl Default for HoldoutProtocol {
    fn default() -> Self {
        Self::of([
            ModelId::new("Gemma-1.1 (2B)").expect("non-empty"),
            ModelId::new("Llama-3 (70B)").expect("non-empty"),
        ])
    }
}

/// Aligns feature vectors with target logits into a [`TrainingSet`].
///
/// Rows are sorted by model id. Models listed in `holdout` land in the
/// holdout split; everything else trains. Models present in `targets` but
/// without a feature vector are ignored; the reverse is an error, as is a
/// holdout model without features.
///
/// # Errors
///
/// - [`SurrogateError::DuplicateModel`] if a model has two feature vectors.
/// - [`SurrogateError::MissingFeature`] if a vector lacks a selected feature.
/// - [`SurrogateError::MissingTarget`] if a vector's model has no logit.
/// - [`SurrogateError::NonFiniteValue`] on NaN/infinite features or targets.
/// - [`SurrogateError::HoldoutNotFound`] if a holdout model has no vector.
/// - [`SurrogateError::EmptyTrainingSet`] if no training rows remain.
pub fn build_dataset(
    vectors: &[FeatureVector],
    targets: &BTreeMap<ModelId, f64>,
    subset: &FeatureSubset,
    holdout: &HoldoutProtocol,
) -> Result<TrainingSet, SurrogateError> {
    let feature_names = subset.members();

    let mut by_model: BTreeMap<&ModelId, &FeatureVector> = BTreeMap::new();
    for vector in vectors {
        if by_model.insert(&vector.model_id, vector).is_some() {
            return Err(SurrogateError::DuplicateModel {
                model: vector.model_id.clone(),
            });
        }
    }

    for model in &holdout.models {
        if !by_model.contains_key(model) {
            return Err(SurrogateError::HoldoutNotFound {
                model: model.clone(),
            });
        }
    }

    let mut train = Vec::new();
    let mut holdout_rows = Vec::new();
    for (model, vector) in by_model {
        let mut features = Vec::with_capacity(feature_names.len());
        for &name in &feature_names {
            let value =
                vector
                    .values
                    .get(&name)
                    .copied()
                    .ok_or_else(|| SurrogateError::MissingFeature {
                        model: model.clone(),
                        feature: name,
                    })?;
            features.push(value);
        }
        let target = targets
            .get(model)
            .copied()
            .ok_or_else(|| SurrogateError::MissingTarget {
                model: model.clone(),
            })?;
        if !target.is_finite() || features.iter().any(|v| !v.is_finite()) {
            return Err(SurrogateError::NonFiniteValue {
                model: model.clone(),
            });
        }
        let row = TrainingRow {
            model_id: model.clone(),
            features,
            target,
        };
        if holdout.models.contains(model) {
            holdout_rows.push(row);
        } else {
            train.push(row);
        }
    }

    if train.is_empty() {
        return Err(SurrogateError::EmptyTrainingSet);
    }
    Ok(TrainingSet {
        feature_names,
        train,
        holdout: holdout_rows,
    })
}
