//! Bootstrapped tournaments: strength estimates with uncertainty.

use crate::{fit_bt, ArenaError, BtLogits, FitOptions, PairCounts};
use ragrank_core::{derive_rng, ModelId, PairwiseJudgment, RngSeed};
use rand::RngExt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Lower and upper quantiles of the reported confidence band.
const CI_LOW_Q: f64 = 0.025;
const CI_HIGH_Q: f64 = 0.975;

/// Configuration of a bootstrapped tournament run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TournamentConfig {
    /// Number of bootstrap tournaments to run.
    pub n_tournaments: usize,
    /// Queries drawn (with replacement) per tournament.
    pub n_queries: usize,
    /// Fraction of the drawn judgments retained per tournament, in `(0, 1]`.
    /// Values below 1 subsample judgments uniformly, emulating sparser
    /// judging of the same query set.
    pub match_fraction: f64,
    /// Seed all per-tournament randomness is derived from.
    pub seed: RngSeed,
    /// Strength-fitting options applied inside every tournament.
    pub fit: FitOptions,
}

impl Default for TournamentConfig {
    fn default() -> Self {
        Self {
            n_tournaments: 200,
            n_queries: 100,
            match_fraction: 1.0,
            seed: RngSeed(0),
            fit: FitOptions::default(),
        }
    }
}

/// Bootstrap aggregate over many tournaments.
///
/// Confidence bounds are reported as *offsets* relative to `mean`, clamped so
/// the band always contains the mean: `ci_low_offset[i] <= 0 <= ci_high_offset[i]`.
/// The bounds themselves are the 2.5th and 97.5th percentiles of the
/// per-tournament logits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BtFit {
    /// Sorted roster shared by all tournaments.
    pub models: Vec<ModelId>,
    /// Mean logit per model over successful tournaments.
    pub mean: Vec<f64>,
    /// 2.5th-percentile logit minus mean, clamped to be nonpositive.
    pub ci_low_offset: Vec<f64>,
    /// 97.5th-percentile logit minus mean, clamped to be nonnegative.
    pub ci_high_offset: Vec<f64>,
    /// Logits of each successful tournament (row per tournament, column per
    /// model, aligned with `models`).
    pub per_tournament: Vec<Vec<f64>>,
    /// Tournaments requested.
    pub n_tournaments: usize,
    /// Tournaments whose fit failed (e.g. a resample disconnected the
    /// comparison graph); these are excluded from the aggregate.
    pub n_failed: usize,
    /// Successful tournaments whose solver hit the iteration cap.
    pub n_unconverged: usize,
    /// Queries drawn per tournament.
    pub n_queries: usize,
    /// Judgment retention fraction used.
    pub match_fraction: f64,
    /// Seed the run was derived from.
    pub seed: RngSeed,
}

/// Runs one bootstrap tournament with randomness derived from
/// `config.seed` and the tournament index.
///
/// Draws `config.n_queries` query ids with replacement from `queries`,
/// gathers every pool judgment of each drawn query (once per draw), retains
/// a `match_fraction` subsample of those judgments, and fits strengths on
/// the result. The roster always spans the whole pool, so tournaments remain
/// dimension-compatible; a resample that strands a model without comparisons
/// makes the fit fail with [`ArenaError::DisconnectedGraph`].
pub fn run_tournament(
    pool: &[PairwiseJudgment],
    queries: &[String],
    config: &TournamentConfig,
    index: usize,
) -> Result<BtLogits, ArenaError> {
    let mut rng = derive_rng(config.seed, &format!("tournament-{index}"));
    run_tournament_with_rng(pool, queries, config, &mut rng)
}

/// [`run_tournament`] with caller-supplied randomness.
///
/// Exposed so drivers and tests can control the sampling stream directly;
/// ordinary callers should prefer [`run_tournament`], which derives an
/// isolated stream per tournament index.
pub fn run_tournament_with_rng<R: RngExt>(
    pool: &[PairwiseJudgment],
    queries: &[String],
    config: &TournamentConfig,
    rng: &mut R,
) -> Result<BtLogits, ArenaError> {
    // Expand the drawn queries into the judgment multiset, in draw order.
    let mut by_query: std::collections::HashMap<&str, Vec<&PairwiseJudgment>> =
        std::collections::HashMap::new();
    for judgment in pool {
        by_query
            .entry(judgment.query_id.as_str())
            .or_default()
            .push(judgment);
    }

    let mut drawn: Vec<&PairwiseJudgment> = Vec::new();
    for _ in 0..config.n_queries {
        let query = &queries[rng.random_range(0..queries.len())];
        if let Some(judgments) = by_query.get(query.as_str()) {
            drawn.extend(judgments.iter().copied());
        }
    }

    // Optionally thin the judgment multiset with a partial Fisher-Yates
    // shuffle: the first k positions end up a uniform sample without
    // replacement.
    let kept = if config.match_fraction < 1.0 {
        let k = (config.match_fraction * drawn.len() as f64).round() as usize;
        for i in 0..k {
            let j = rng.random_range(i..drawn.len());
            drawn.swap(i, j);
        }
        &drawn[..k]
    } else {
        &drawn[..]
    };

    let roster: std::collections::BTreeSet<ModelId> = pool
        .iter()
        .flat_map(|j| [j.model_a.clone(), j.model_b.clone()])
        .collect();
    let mut counts = PairCounts::new(roster);
    for judgment in kept {
        counts.record(judgment);
    }
    fit_bt(&counts, &config.fit)
}

/// Runs `config.n_tournaments` bootstrap tournaments over `pool` and
/// aggregates per-model means and percentile confidence bands.
///
/// `queries` is the universe draws are taken from — typically the distinct
/// query ids of the evaluation set. Tournaments run in parallel but the
/// result is reproducible: each tournament's randomness depends only on
/// `config.seed` and its index.
///
/// Tournaments whose fit fails are skipped and counted in
/// [`BtFit::n_failed`]; if every tournament fails the whole call errors.
pub fn bootstrap_bt(
    pool: &[PairwiseJudgment],
    queries: &[String],
    config: &TournamentConfig,
) -> Result<BtFit, ArenaError> {
    if config.n_tournaments == 0 {
        return Err(ArenaError::InvalidConfig {
            field: "n_tournaments",
            value: "0".to_string(),
            reason: "must be at least 1",
        });
    }
    if config.n_queries == 0 {
        return Err(ArenaError::InvalidConfig {
            field: "n_queries",
            value: "0".to_string(),
            reason: "must be at least 1",
        });
    }
    if !(config.match_fraction > 0.0 && config.match_fraction <= 1.0) {
        return Err(ArenaError::InvalidConfig {
            field: "match_fraction",
            value: config.match_fraction.to_string(),
            reason: "must lie in (0, 1]",
        });
    }
    if pool.is_empty() || queries.is_empty() {
        return Err(ArenaError::NoJudgments);
    }

    let results: Vec<Result<BtLogits, ArenaError>> = (0..config.n_tournaments)
        .into_par_iter()
        .map(|index| run_tournament(pool, queries, config, index))
        .collect();

    let mut per_tournament: Vec<Vec<f64>> = Vec::with_capacity(config.n_tournaments);
    let mut models: Option<Vec<ModelId>> = None;
    let mut n_failed = 0;
    let mut n_unconverged = 0;
    for result in results {
        match result {
            Ok(fit) => {
                if !fit.converged {
                    n_unconverged += 1;
                }
                models.get_or_insert(fit.models);
                per_tournament.push(fit.logits);
            }
            Err(_) => n_failed += 1,
        }
    }

    let Some(models) = models else {
        return Err(ArenaError::AllTournamentsFailed {
            n_tournaments: config.n_tournaments,
        });
    };

    let n_models = models.len();
    let n_ok = per_tournament.len();
    let mut mean = vec![0.0_f64; n_models];
    for row in &per_tournament {
        for (m, logit) in mean.iter_mut().zip(row) {
            *m += logit;
        }
    }
    for m in mean.iter_mut() {
        *m /= n_ok as f64;
    }

    let mut ci_low_offset = vec![0.0_f64; n_models];
    let mut ci_high_offset = vec![0.0_f64; n_models];
    let mut column = vec![0.0_f64; n_ok];
    for i in 0..n_models {
        for (slot, row) in column.iter_mut().zip(&per_tournament) {
            *slot = row[i];
        }
        column.sort_by(|a, b| a.partial_cmp(b).expect("logits are finite"));
        ci_low_offset[i] = (percentile(&column, CI_LOW_Q) - mean[i]).min(0.0);
        ci_high_offset[i] = (percentile(&column, CI_HIGH_Q) - mean[i]).max(0.0);
    }

    Ok(BtFit {
        models,
        mean,
        ci_low_offset,
        ci_high_offset,
        per_tournament,
        n_tournaments: config.n_tournaments,
        n_failed,
        n_unconverged,
        n_queries: config.n_queries,
        match_fraction: config.match_fraction,
        seed: config.seed,
    })
}

/// Linear-interpolation percentile of an ascending-sorted slice: the value at
/// fractional rank `(n - 1) * q`.
fn percentile(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}
