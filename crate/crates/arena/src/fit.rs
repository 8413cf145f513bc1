//! Bradley-Terry strength fitting via minorization-maximization.

use crate::{ArenaError, PairCounts};
use ragrank_core::ModelId;
use serde::{Deserialize, Serialize};

/// Strength fitting knobs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FitOptions {
    /// Symmetric pseudo-count added to both directions of every *observed*
    /// pair before fitting. Regularizes away infinite logits when one model
    /// never loses, without connecting pairs that were never compared.
    pub pseudo_count: f64,
    /// Convergence threshold on the max absolute change in log-strength
    /// between iterations.
    pub tol: f64,
    /// Iteration cap; hitting it clears the `converged` flag but still
    /// returns the final iterate.
    pub max_iter: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            pseudo_count: 0.5,
            tol: 1e-8,
            max_iter: 10_000,
        }
    }
}

/// Result of a Bradley-Terry fit: mean-centered log-strengths.
#[derive(Debug, Clone, PartialEq)]
pub struct BtLogits {
    /// Sorted roster the fit was run over.
    pub models: Vec<ModelId>,
    /// Mean-centered log-strength per model, aligned with `models`.
    pub logits: Vec<f64>,
    /// Whether the solver met `tol` within `max_iter` iterations.
    pub converged: bool,
    /// Iterations actually performed.
    pub iterations: usize,
}

/// Floor applied to strengths each iteration to keep logs finite.
const STRENGTH_FLOOR: f64 = 1e-12;

/// Fits Bradley-Terry strengths to a win matrix and returns mean-centered
/// logits.
///
/// Under the Bradley-Terry model, model `i` beats model `j` with probability
/// `p_i / (p_i + p_j)`. The fit maximizes the likelihood of the observed
/// (possibly fractional) win counts with the classic minorization-
/// maximization update
///
/// ```text
/// p_i <- W_i / sum_{j != i} n_ij / (p_i + p_j)
/// ```
///
/// where `W_i` is model `i`'s total wins and `n_ij` the comparisons between
/// `i` and `j`, iterated in batch until the max log-strength change falls
/// below `options.tol`. Strengths are rescaled to unit geometric mean every
/// iteration, so the returned logits are mean-centered.
///
/// Ties should already be folded in as half-wins (as [`PairCounts`] does).
/// A positive `pseudo_count` is added to both directions of every observed
/// pair; pairs with no comparisons stay untouched, so regularization never
/// fabricates connectivity.
///
/// # Errors
///
/// - [`ArenaError::NoJudgments`] if the matrix has no comparisons at all.
/// - [`ArenaError::DisconnectedGraph`] if the models cannot all be reached
///   from one another through judged pairs.
/// - [`ArenaError::InvalidConfig`] for a negative pseudo-count, nonpositive
///   tolerance, or a zero iteration cap.
pub fn fit_bt(counts: &PairCounts, options: &FitOptions) -> Result<BtLogits, ArenaError> {
    if options.pseudo_count < 0.0 {
        return Err(ArenaError::InvalidConfig {
            field: "pseudo_count",
            value: options.pseudo_count.to_string(),
            reason: "must be nonnegative",
        });
    }
    if !(options.tol > 0.0) {
        return Err(ArenaError::InvalidConfig {
            field: "tol",
            value: options.tol.to_string(),
            reason: "must be positive",
        });
    }
    if options.max_iter == 0 {
        return Err(ArenaError::InvalidConfig {
            field: "max_iter",
            value: "0".to_string(),
            reason: "must be at least 1",
        });
    }

    let n = counts.n_models();
    if n == 0 || counts.total_comparisons() == 0.0 {
        return Err(ArenaError::NoJudgments);
    }
    if n == 1 {
        return Ok(BtLogits {
            models: counts.models().to_vec(),
            logits: vec![0.0],
            converged: true,
            iterations: 0,
        });
    }

    check_connected(counts)?;

    // Regularized win matrix: every observed pair gains the pseudo-count in
    // both directions.
    let mut wins = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && counts.pair_total(i, j) > 0.0 {
                wins[i][j] = counts.wins(i, j) + options.pseudo_count;
            }
        }
    }

    let total_wins: Vec<f64> = (0..n).map(|i| wins[i].iter().sum()).collect();

    let mut strengths = vec![1.0_f64; n];
    let mut converged = false;
    let mut iterations = 0;

    for iter in 1..=options.max_iter {
        iterations = iter;
        let mut next = vec![0.0_f64; n];
        for i in 0..n {
            let mut denom = 0.0;
            for j in 0..n {
                if i == j {
                    continue;
                }
                let pair_n = wins[i][j] + wins[j][i];
                if pair_n > 0.0 {
                    denom += pair_n / (strengths[i] + strengths[j]);
                }
            }
            next[i] = if denom > 0.0 {
                (total_wins[i] / denom).max(STRENGTH_FLOOR)
            } else {
                strengths[i]
            };
        }

        // Rescale to unit geometric mean so the parametrization stays pinned.
        let log_mean: f64 = next.iter().map(|p| p.ln()).sum::<f64>() / n as f64;
        let scale = (-log_mean).exp();
        for p in next.iter_mut() {
            *p = (*p * scale).max(STRENGTH_FLOOR);
        }

        let delta = strengths
            .iter()
            .zip(&next)
            .map(|(old, new)| (new.ln() - old.ln()).abs())
            .fold(0.0_f64, f64::max);
        strengths = next;
        if delta < options.tol {
            converged = true;
            break;
        }
    }

    let mut logits: Vec<f64> = strengths.iter().map(|p| p.ln()).collect();
    let mean = logits.iter().sum::<f64>() / n as f64;
    for logit in logits.iter_mut() {
        *logit -= mean;
    }

    Ok(BtLogits {
        models: counts.models().to_vec(),
        logits,
        converged,
        iterations,
    })
}

/// Verifies that every model is reachable from every other through pairs with
/// at least one comparison.
fn check_connected(counts: &PairCounts) -> Result<(), ArenaError> {
    let n = counts.n_models();
    let mut visited = vec![false; n];
    let mut stack = vec![0_usize];
    visited[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if !visited[j] && counts.pair_total(i, j) > 0.0 {
                visited[j] = true;
                stack.push(j);
            }
        }
    }
    if let Some(unreached) = visited.iter().position(|v| !v) {
        return Err(ArenaError::DisconnectedGraph {
            component_a: counts.models()[0].clone(),
            component_b: counts.models()[unreached].clone(),
        });
    }
    Ok(())
}
