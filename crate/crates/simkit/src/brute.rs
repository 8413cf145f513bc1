//! Deliberately naive reference implementations used as test oracles.
//!
//! Each function here recomputes, by the most transparent method available,
//! a quantity the main crates obtain with a fast algorithm. None of them are
//! meant for production use; they trade all efficiency for being easy to
//! audit by eye.

use crate::SimError;

/// Longest ties an input may have before the exponential recursion below
/// becomes unreasonable.
const MAX_LCS_LEN: usize = 12;
/// Largest roster the grid-search strength fit supports.
const MAX_BT_MODELS: usize = 3;
/// Coarse grid: step and radius of the exhaustive scan.
const COARSE_STEP: f64 = 0.01;
const COARSE_RADIUS: f64 = 3.0;
/// Fine grid: step and radius of the refinement scan around the coarse argmax.
const FINE_STEP: f64 = 0.001;
const FINE_RADIUS: f64 = 0.02;

/// Longest common subsequence length by plain recursion, no memoization.
///
/// Exponential on purpose — the obviously-correct textbook recurrence, used
/// to cross-check the dynamic-programming implementation on short inputs.
///
/// # Errors
///
/// [`SimError::SequenceTooLong`] if either input exceeds 12 elements.
pub fn brute_force_lcs<T: PartialEq>(a: &[T], b: &[T]) -> Result<usize, SimError> {
    for len in [a.len(), b.len()] {
        if len > MAX_LCS_LEN {
            return Err(SimError::SequenceTooLong {
                len,
                max: MAX_LCS_LEN,
            });
        }
    }
    fn recurse<T: PartialEq>(a: &[T], b: &[T]) -> usize {
        match (a.split_last(), b.split_last()) {
            (Some((la, ra)), Some((lb, rb))) => {
                if la == lb {
                    1 + recurse(ra, rb)
                } else {
                    recurse(ra, b).max(recurse(a, rb))
                }
            }
            _ => 0,
        }
    }
    Ok(recurse(a, b))
}

/// Kendall rank correlation (tie-adjusted) by examining every pair.
///
/// For each of the `n * (n-1) / 2` index pairs, classifies the pair as
/// concordant, discordant, or tied in `x` and/or `y`, then applies
///
/// ```text
/// tau_b = (C - D) / sqrt((n0 - tx) * (n0 - ty))
/// ```
///
/// where `n0` is the number of pairs and `tx`/`ty` count pairs tied in each
/// input. Quadratic on purpose; cross-checks the sort-based implementation.
///
/// # Errors
///
/// - [`SimError::LengthMismatch`] if the inputs differ in length.
/// - [`SimError::TooShort`] for fewer than 2 observations.
/// - [`SimError::DegenerateRanking`] if either input is entirely tied.
pub fn brute_force_tau(x: &[f64], y: &[f64]) -> Result<f64, SimError> {
    if x.len() != y.len() {
        return Err(SimError::LengthMismatch {
            x: x.len(),
            y: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(SimError::TooShort { len: x.len() });
    }

    let n = x.len();
    let mut concordant = 0u64;
    let mut discordant = 0u64;
    let mut tied_x = 0u64;
    let mut tied_y = 0u64;
    for i in 0..n {
        for j in (i + 1)..n {
            let dx = (x[i] - x[j]).partial_cmp(&0.0).expect("finite inputs");
            let dy = (y[i] - y[j]).partial_cmp(&0.0).expect("finite inputs");
            use std::cmp::Ordering::Equal;
            if dx == Equal {
                tied_x += 1;
            }
            if dy == Equal {
                tied_y += 1;
            }
            if dx != Equal && dy != Equal {
                if dx == dy {
                    concordant += 1;
                } else {
                    discordant += 1;
                }
            }
        }
    }

    let n0 = (n * (n - 1) / 2) as f64;
    let denom_x = n0 - tied_x as f64;
    let denom_y = n0 - tied_y as f64;
    if denom_x == 0.0 || denom_y == 0.0 {
        return Err(SimError::DegenerateRanking);
    }
    Ok((concordant as f64 - discordant as f64) / (denom_x * denom_y).sqrt())
}

/// Maximum-likelihood strength logits by exhaustive grid search.
///
/// `wins[i][j]` is the (possibly fractional) number of wins of model `i`
/// over model `j`; ties should already be folded in as half-wins. Model 0 is
/// anchored at logit 0 and the remaining coordinates are scanned over
/// `[-3, 3]` in steps of 0.01, maximizing the exact likelihood of the table
/// under win probability `sigmoid(logit_i - logit_j)`; a second scan at step
/// 0.001 refines around the coarse argmax. The returned logits are
/// mean-centered.
///
/// No regularization is applied, so the table must have interior win rates
/// for the maximum to be finite and within the grid.
///
/// # Errors
///
/// - [`SimError::TooManyModels`] for more than 3 models.
/// - [`SimError::RaggedMatrix`] if `wins` is not square.
pub fn brute_force_bt(wins: &[Vec<f64>]) -> Result<Vec<f64>, SimError> {
    let n = wins.len();
    if n > MAX_BT_MODELS {
        return Err(SimError::TooManyModels {
            n,
            max: MAX_BT_MODELS,
        });
    }
    for (row, r) in wins.iter().enumerate() {
        if r.len() != n {
            return Err(SimError::RaggedMatrix {
                row,
                len: r.len(),
                n,
            });
        }
    }
    if n < 2 {
        return Ok(vec![0.0; n]);
    }

    let log_likelihood = |theta: &[f64]| -> f64 {
        let mut ll = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j && wins[i][j] > 0.0 {
                    let p = 1.0 / (1.0 + (theta[j] - theta[i]).exp());
                    ll += wins[i][j] * p.ln();
                }
            }
        }
        ll
    };

    // theta[0] is anchored at 0; scan the free coordinates on a grid.
    let scan = |center: &[f64], step: f64, radius: f64| -> Vec<f64> {
        let ticks = (radius / step).round() as i64;
        let mut best = center.to_vec();
        let mut best_ll = f64::NEG_INFINITY;
        let mut theta = vec![0.0; n];
        match n {
            2 => {
                for t in -ticks..=ticks {
                    theta[1] = center[1] + t as f64 * step;
                    let ll = log_likelihood(&theta);
                    if ll > best_ll {
                        best_ll = ll;
                        best = theta.clone();
                    }
                }
            }
            3 => {
                for t1 in -ticks..=ticks {
                    theta[1] = center[1] + t1 as f64 * step;
                    for t2 in -ticks..=ticks {
                        theta[2] = center[2] + t2 as f64 * step;
                        let ll = log_likelihood(&theta);
                        if ll > best_ll {
                            best_ll = ll;
                            best = theta.clone();
                        }
                    }
                }
            }
            _ => unreachable!("n is validated to be 2 or 3"),
        }
        best
    };

    let coarse = scan(&vec![0.0; n], COARSE_STEP, COARSE_RADIUS);
    let mut best = scan(&coarse, FINE_STEP, FINE_RADIUS);

    let mean = best.iter().sum::<f64>() / n as f64;
    for theta in best.iter_mut() {
        *theta -= mean;
    }
    Ok(best)
}
