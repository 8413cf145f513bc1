//! Bootstrap-aggregated regression forest.

use crate::dataset::TrainingSet;
use crate::tree::{grow_tree, GrowControls, Tree};
use crate::SurrogateError;
use rand::RngExt;
use ragrank_core::{derive_rng, RngSeed};
use ragrank_textmetrics::{FeatureName, FeatureVector};
use serde::{Deserialize, Serialize};

/// Format version written to and required from serialized forests.
pub const FOREST_FORMAT_VERSION: u32 = 1;

/// Forest hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForestHyper {
    /// Trees in the ensemble.
    pub n_trees: usize,
    /// Depth cap per tree; `None` grows until leaves are pure or too small.
    pub max_depth: Option<usize>,
    /// Minimum rows each child of a split must keep.
    pub min_leaf: usize,
    /// Fraction of features considered at each split (rounded up).
    pub feature_fraction: f64,
}

impl Default for ForestHyper {
    fn default() -> Self {
        Self {
            n_trees: 100,
            max_depth: None,
            min_leaf: 1,
            feature_fraction: 1.0 / 3.0,
        }
    }
}

impl ForestHyper {
    fn validate(&self) -> Result<(), SurrogateError> {
        if self.n_trees == 0 {
            return Err(SurrogateError::InvalidHyper {
                field: "n_trees",
                value: "0".to_string(),
                reason: "must be at least 1",
            });
        }
        if self.min_leaf == 0 {
            return Err(SurrogateError::InvalidHyper {
                field: "min_leaf",
                value: "0".to_string(),
                reason: "must be at least 1",
            });
        }
        if !(self.feature_fraction > 0.0 && self.feature_fraction <= 1.0) {
            return Err(SurrogateError::InvalidHyper {
                field: "feature_fraction",
                value: self.feature_fraction.to_string(),
                reason: "must lie in (0, 1]",
            });
        }
        Ok(())
    }
}

/// A trained forest: predicts a strength logit from a feature row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionForest {
    /// Format version stamp for serialized copies.
    pub format_version: u32,
    /// Feature order prediction rows must follow.
    pub feature_names: Vec<FeatureName>,
    /// Hyperparameters the forest was trained with.
    pub hyper: ForestHyper,
    /// Normalized importance per feature (sums to 1 when any split exists,
    /// all zeros otherwise): each feature's share of the total squared-error
    /// reduction achieved by splits on it.
    pub importance: Vec<f64>,
    /// The ensemble.
    pub trees: Vec<Tree>,
}

/// Trains a regression forest on the training split of `set`.
///
/// Each tree grows on a bootstrap resample of the training rows (same size,
/// drawn with replacement) and consider a fresh random subset of
/// `ceil(feature_fraction * p)` features at every split. All randomness comes
/// from per-tree streams `tree-0`, `tree-1`, ... derived from `seed`, so
/// training is reproducible and independent of thread scheduling.
///
/// # Errors
///
/// - [`SurrogateError::EmptyTrainingSet`] if `set.train` is empty.
/// - [`SurrogateError::InvalidHyper`] for out-of-range hyperparameters.
pub fn train_forest(
    set: &TrainingSet,
    hyper: &ForestHyper,
    seed: RngSeed,
) -> Result<RegressionForest, SurrogateError> {
    hyper.validate()?;
    if set.train.is_empty() {
        return Err(SurrogateError::EmptyTrainingSet);
    }

    let x: Vec<Vec<f64>> = set.train.iter().map(|r| r.features.clone()).collect();
    let y: Vec<f64> = set.train.iter().map(|r| r.target).collect();
    let n = x.len();
    let p = set.feature_names.len();
    let features_per_split = ((hyper.feature_fraction * p as f64).ceil() as usize)
        .clamp(1, p.max(1));

    let controls = GrowControls {
        x: &x,
        y: &y,
        n_features: p,
        features_per_split,
        max_depth: hyper.max_depth,
        min_leaf: hyper.min_leaf,
    };

    let mut trees = Vec::with_capacity(hyper.n_trees);
    let mut importance = vec![0.0_f64; p];
    for i in 0..hyper.n_trees {
        let mut rng = derive_rng(seed, &format!("tree-{i}"));
        let rows: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
        let grown = grow_tree(&controls, rows, &mut rng);
        for (total, delta) in importance.iter_mut().zip(&grown.impurity_decrease) {
            *total += delta;
        }
        trees.push(grown.tree);
    }

    let total: f64 = importance.iter().sum();
    if total > 0.0 {
        for value in importance.iter_mut() {
            *value /= total;
        }
    }

    Ok(RegressionForest {
        format_version: FOREST_FORMAT_VERSION,
        feature_names: set.feature_names.clone(),
        hyper: *hyper,
        importance,
        trees,
    })
}

impl RegressionForest {
    /// Predicts from a dense feature row in the forest's feature order.
    ///
    /// # Errors
    ///
    /// [`SurrogateError::DimensionMismatch`] on a row of the wrong width.
    pub fn predict(&self, row: &[f64]) -> Result<f64, SurrogateError> {
        if row.len() != self.feature_names.len() {
            return Err(SurrogateError::DimensionMismatch {
                expected: self.feature_names.len(),
                got: row.len(),
            });
        }
        let sum: f64 = self.trees.iter().map(|t| t.predict(row)).sum();
        Ok(sum / self.trees.len() as f64)
    }

    /// Predicts from a named feature vector.
    ///
    /// # Errors
    ///
    /// [`SurrogateError::MissingFeature`] if the vector lacks any feature the
    /// forest was trained on.
    pub fn predict_vector(&self, vector: &FeatureVector) -> Result<f64, SurrogateError> {
        let row =
            vector
                .row(&self.feature_names)
                .ok_or_else(|| SurrogateError::MissingFeature {
                    model: vector.model_id.clone(),
                    feature: *self
                        .feature_names
                        .iter()
                        .find(|name| !vector.values.contains_key(name))
                        .expect("row() fails only when a feature is absent"),
                })?;
        self.predict(&row)
    }

    /// Serializes to pretty JSON, including the format version.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("forest serialization cannot fail")
    }

    /// Restores a forest serialized by [`RegressionForest::to_json`].
    ///
    /// # Errors
    ///
    /// - [`SurrogateError::MalformedForestFile`] on parse failure.
    /// - [`SurrogateError::UnsupportedFormatVersion`] on a version mismatch.
    pub fn from_json(json: &str) -> Result<Self, SurrogateError> {
        let forest: Self = serde_json::from_str(json)?;
        if forest.format_version != FOREST_FORMAT_VERSION {
            return Err(SurrogateError::UnsupportedFormatVersion {
                found: forest.format_version,
                supported: FOREST_FORMAT_VERSION,
            });
        }
        Ok(forest)
    }
}
