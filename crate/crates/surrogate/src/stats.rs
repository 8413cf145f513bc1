//! Rank correlation and goodness-of-fit statistics.

use crate::SurrogateError;

/// Kendall rank correlation with tie adjustment, by sorting and inversion
/// counting.
///
/// Sorts once by `(x, y)`, counts discordant pairs as mergesort inversions in
/// the `y` sequence, and corrects for ties:
///
/// ```text
/// tau_b = (n0 - tx - ty + txy - 2 * swaps) / sqrt((n0 - tx) * (n0 - ty))
/// ```
///
/// where `n0` is the number of index pairs, `tx`/`ty` count pairs tied in
/// `x`/`y`, and `txy` counts pairs tied in both. Runs in `O(n log n)`.
///
/// # Errors
///
/// - [`SurrogateError::LengthMismatch`] if the inputs differ in length.
/// - [`SurrogateError::TooShort`] for fewer than 2 observations.
/// - [`SurrogateError::NonFiniteInput`] on NaN or infinity.
/// - [`SurrogateError::DegenerateRanking`] if either input is entirely tied.
pub fn kendall_tau(x: &[f64], y: &[f64]) -> Result<f64, SurrogateError> {
    if x.len() != y.len() {
        return Err(SurrogateError::LengthMismatch {
            x: x.len(),
            y: y.len(),
        });
    }
    let n = x.len();
    if n < 2 {
        return Err(SurrogateError::TooShort { len: n });
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(SurrogateError::NonFiniteInput);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        x[a].partial_cmp(&x[b])
            .expect("inputs checked finite")
            .then(y[a].partial_cmp(&y[b]).expect("inputs checked finite"))
    });

    // Pairs tied in x, and tied in both, from runs in the (x, y) order.
    let tie_pairs = |run: usize| (run * (run - 1) / 2) as f64;
    let mut tx = 0.0;
    let mut txy = 0.0;
    {
        let mut run_x = 1;
        let mut run_xy = 1;
        for w in order.windows(2) {
            let (a, b) = (w[0], w[1]);
            if x[a] == x[b] {
                run_x += 1;
                if y[a] == y[b] {
                    run_xy += 1;
                } else {
                    txy += tie_pairs(run_xy);
                    run_xy = 1;
                }
            } else {
                tx += tie_pairs(run_x);
                txy += tie_pairs(run_xy);
                run_x = 1;
                run_xy = 1;
            }
        }
        tx += tie_pairs(run_x);
        txy += tie_pairs(run_xy);
    }

    // Discordant pairs = inversions needed to sort y (currently in x-order).
    let mut ys: Vec<f64> = order.iter().map(|&i| y[i]).collect();
    let swaps = count_inversions(&mut ys);

    // Pairs tied in y, from runs in the now-sorted y.
    let mut ty = 0.0;
    {
        let mut run_y = 1;
        for w in ys.windows(2) {
            if w[0] == w[1] {
                run_y += 1;
            } else {
                ty += tie_pairs(run_y);
                run_y = 1;
            }
        }
        ty += tie_pairs(run_y);
    }

    let n0 = (n * (n - 1) / 2) as f64;
    let denom_x = n0 - tx;
    let denom_y = n0 - ty;
    if denom_x == 0.0 || denom_y == 0.0 {
        return Err(SurrogateError::DegenerateRanking);
    }
    let concordant_minus_discordant = n0 - tx - ty + txy - 2.0 * swaps;
    Ok(concordant_minus_discordant / (denom_x * denom_y).sqrt())
}

/// Counts inversions while mergesorting `values` in place. Equal elements are
/// not inversions.
fn count_inversions(values: &mut [f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let mid = n / 2;
    let (left, right) = values.split_at_mut(mid);
    let mut inversions = count_inversions(left) + count_inversions(right);

    let mut merged = Vec::with_capacity(n);
    let (mut i, mut j) = (0, 0);
    while i < left.len() && j < right.len() {
        if left[i] <= right[j] {
            merged.push(left[i]);
            i += 1;
        } else {
            // right[j] jumps ahead of everything left in `left`.
            inversions += (left.len() - i) as f64;
            merged.push(right[j]);
            j += 1;
        }
    }
    merged.extend_from_slice(&left[i..]);
    merged.extend_from_slice(&right[j..]);
    values.copy_from_slice(&merged);
    inversions
}

/// Coefficient of determination of predictions against true values.
///
/// `1 - ss_res / ss_tot`; equals 1 for perfect predictions and can be
/// arbitrarily negative for predictions worse than the mean.
///
/// # Errors
///
/// - [`SurrogateError::LengthMismatch`] if the inputs differ in length.
/// - [`SurrogateError::TooShort`] for fewer than 2 observations.
/// - [`SurrogateError::NonFiniteInput`] on NaN or infinity.
/// - [`SurrogateError::ConstantTarget`] if all true values are identical.
pub fn r_squared(y_true: &[f64], y_pred: &[f64]) -> Result<f64, SurrogateError> {
    if y_true.len() != y_pred.len() {
        return Err(SurrogateError::LengthMismatch {
            x: y_true.len(),
            y: y_pred.len(),
        });
    }
    if y_true.len() < 2 {
        return Err(SurrogateError::TooShort { len: y_true.len() });
    }
    if y_true.iter().chain(y_pred).any(|v| !v.is_finite()) {
        return Err(SurrogateError::NonFiniteInput);
    }
    let (lo, hi) = y_true
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if lo == hi {
        return Err(SurrogateError::ConstantTarget);
    }

    let mean = y_true.iter().sum::<f64>() / y_true.len() as f64;
    let ss_tot: f64 = y_true.iter().map(|t| (t - mean).powi(2)).sum();
    let ss_res: f64 = y_true
        .iter()
        .zip(y_pred)
        .map(|(t, p)| (t - p).powi(2))
        .sum();
    Ok(1.0 - ss_res / ss_tot)
}

/// Linear-interpolation percentile of an ascending-sorted slice.
pub(crate) fn percentile(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}
