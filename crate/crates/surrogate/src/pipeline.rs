//! End-to-end surrogate pipeline: dataset assembly, training, evaluation.

use crate::dataset::{build_dataset, HoldoutProtocol, TrainingRow};
use crate::forest::{train_forest, ForestHyper, RegressionForest};
use crate::stats::{kendall_tau, percentile, r_squared};
use crate::SurrogateError;
use rand::RngExt;
use ragrank_arena::{to_leaderboard, BtFit, RankedLeaderboard};
use ragrank_core::{derive_rng, ModelId, RngSeed};
use ragrank_textmetrics::{FeatureSubset, FeatureVector};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Quantiles of the per-tournament confidence band.
const CI_LOW_Q: f64 = 0.025;
const CI_HIGH_Q: f64 = 0.975;

/// Pipeline knobs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Features the surrogate may use.
    pub subset: FeatureSubset,
    /// Models held out of training for honest evaluation.
    pub holdout: HoldoutProtocol,
    /// Forest hyperparameters.
    pub hyper: ForestHyper,
    /// Seed for all training randomness.
    pub seed: RngSeed,
    /// Whether to refit the surrogate against every bootstrap tournament and
    /// report the spread of holdout accuracy.
    pub per_tournament_r2: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            subset: FeatureSubset::All11,
            holdout: HoldoutProtocol::default(),
            hyper: ForestHyper::default(),
            seed: RngSeed(0),
            per_tournament_r2: true,
        }
    }
}

/// Distribution of holdout accuracy across per-tournament refits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerTournamentR2 {
    /// Holdout coefficient of determination per successful refit.
    pub values: Vec<f64>,
    /// Mean over `values`.
    pub mean: f64,
    /// 2.5th percentile of `values`.
    pub ci_low: f64,
    /// 97.5th percentile of `values`.
    pub ci_high: f64,
    /// Tournaments skipped because their holdout targets were all equal.
    pub n_skipped: usize,
}

/// Everything the pipeline produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    /// The trained surrogate.
    pub forest: RegressionForest,
    /// Models that were held out of training.
    pub holdout_models: Vec<ModelId>,
    /// Predicted strength logit for every model with features, holdout
    /// included.
    pub predictions: BTreeMap<ModelId, f64>,
    /// Leaderboard ranked by predicted strength.
    pub predicted_board: RankedLeaderboard,
    /// Kendall rank correlation between predicted strengths and the
    /// tournament means, over all models.
    pub tau_vs_bt: f64,
    /// Holdout coefficient of determination against the tournament means;
    /// absent when fewer than two models are held out or their targets tie.
    pub holdout_r2: Option<f64>,
    /// Spread of holdout accuracy across per-tournament refits; absent when
    /// disabled or not computable.
    pub per_tournament_r2: Option<PerTournamentR2>,
    /// Human-readable notes about anything the pipeline had to skip.
    pub warnings: Vec<String>,
}

/// Trains a surrogate on pooled tournament strengths and evaluates it.
///
/// Steps:
///
/// 1. Pair each model's feature vector with its mean tournament logit from
///    `bt`, holding out `config.holdout` models.
/// 2. Train a regression forest on the training split.
/// 3. Predict every model, rank the predictions, and correlate them with the
///    tournament means ([`PipelineReport::tau_vs_bt`]).
/// 4. Score holdout accuracy ([`PipelineReport::holdout_r2`]), and — when
///    enabled — refit against each bootstrap tournament's logits (streams
///    `tournament-fit-0`, `tournament-fit-1`, ...) to measure how stable that
///    accuracy is across resamples.
pub fn surrogate_pipeline(
    vectors: &[FeatureVector],
    bt: &BtFit,
    config: &PipelineConfig,
) -> Result<PipelineReport, SurrogateError> {
    let mut warnings = Vec::new();

    let targets: BTreeMap<ModelId, f64> = bt
        .models
        .iter()
        .cloned()
        .zip(bt.mean.iter().copied())
        .collect();
    let set = build_dataset(vectors, &targets, &config.subset, &config.holdout)?;
    let forest = train_forest(&set, &config.hyper, config.seed)?;

    let mut predictions = BTreeMap::new();
    for row in set.train.iter().chain(&set.holdout) {
        predictions.insert(row.model_id.clone(), forest.predict(&row.features)?);
    }
    let predicted_board = to_leaderboard(&predictions)?;

    let mut paired_targets = Vec::with_capacity(predictions.len());
    let mut paired_predictions = Vec::with_capacity(predictions.len());
    for (model, &prediction) in &predictions {
        paired_targets.push(targets[model]);
        paired_predictions.push(prediction);
    }
    let tau_vs_bt = kendall_tau(&paired_targets, &paired_predictions)?;

    let holdout_r2 = match holdout_r2(&set.holdout, &forest)? {
        Ok(r2) => Some(r2),
        Err(note) => {
            warnings.push(note);
            None
        }
    };

    let per_tournament_r2 = if config.per_tournament_r2 {
        match per_tournament_spread(vectors, bt, config, &mut warnings)? {
            Some(spread) => Some(spread),
            None => None,
        }
    } else {
        None
    };

    if config.holdout.models.is_empty() {
        warnings.push(
            "no models were held out: all evaluation scores are on training data".to_string(),
        );
    }

    Ok(PipelineReport {
        holdout_models: set
            .holdout
            .iter()
            .map(|row| row.model_id.clone())
            .collect(),
        forest,
        predictions,
        predicted_board,
        tau_vs_bt,
        holdout_r2,
        per_tournament_r2,
        warnings,
    })
}

/// Holdout R² of a trained forest, or a warning explaining why it is
/// unavailable. The outer `Result` carries real failures.
fn holdout_r2(
    holdout: &[TrainingRow],
    forest: &RegressionForest,
) -> Result<Result<f64, String>, SurrogateError> {
    if holdout.len() < 2 {
        return Ok(Err(format!(
            "holdout accuracy needs at least 2 models, have {}",
            holdout.len()
        )));
    }
    let truths: Vec<f64> = holdout.iter().map(|r| r.target).collect();
    let mut predictions = Vec::with_capacity(holdout.len());
    for row in holdout {
        predictions.push(forest.predict(&row.features)?);
    }
    match r_squared(&truths, &predictions) {
        Ok(r2) => Ok(Ok(r2)),
        Err(SurrogateError::ConstantTarget) => Ok(Err(
            "holdout targets are all equal; coefficient of determination undefined".to_string(),
        )),
        Err(other) => Err(other),
    }
}

/// Refits the surrogate against every bootstrap tournament and collects the
/// holdout R² distribution. Returns `None` (with a warning pushed) when the
/// spread cannot be computed at all.
fn per_tournament_spread(
    vectors: &[FeatureVector],
    bt: &BtFit,
    config: &PipelineConfig,
    warnings: &mut Vec<String>,
) -> Result<Option<PerTournamentR2>, SurrogateError> {
    if bt.per_tournament.is_empty() {
        warnings.push(
            "per-tournament accuracy skipped: fit carries no per-tournament logits".to_string(),
        );
        return Ok(None);
    }
    if config.holdout.models.len() < 2 {
        warnings.push(
            "per-tournament accuracy skipped: needs at least 2 holdout models".to_string(),
        );
        return Ok(None);
    }

    let mut values = Vec::with_capacity(bt.per_tournament.len());
    let mut n_skipped = 0usize;
    for (index, logits) in bt.per_tournament.iter().enumerate() {
        let targets: BTreeMap<ModelId, f64> = bt
            .models
            .iter()
            .cloned()
            .zip(logits.iter().copied())
            .collect();
        let set = build_dataset(vectors, &targets, &config.subset, &config.holdout)?;
        let sub_seed = RngSeed(derive_rng(config.seed, &format!("tournament-fit-{index}")).random());
        let forest = train_forest(&set, &config.hyper, sub_seed)?;
        match holdout_r2(&set.holdout, &forest)? {
            Ok(r2) => values.push(r2),
            Err(_) => n_skipped += 1,
        }
    }

    if values.is_empty() {
        warnings.push(format!(
            "per-tournament accuracy skipped: all {n_skipped} tournaments had degenerate holdout targets"
        ));
        return Ok(None);
    }

    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let mut sorted = values.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite scores"));
    Ok(Some(PerTournamentR2 {
        mean,
        ci_low: percentile(&sorted, CI_LOW_Q),
        ci_high: percentile(&sorted, CI_HIGH_Q),
        values,
        n_skipped,
    }))
}
