//! Ordinary least-squares baseline with adaptive ridge fallback.

use crate::SurrogateError;

/// Ridge strength applied only when the unregularized system is
/// ill-conditioned.
const FALLBACK_RIDGE: f64 = 1e-6;
/// A pivot this small relative to the matrix scale marks the system as
/// ill-conditioned.
const PIVOT_RTOL: f64 = 1e-10;

/// A fitted linear model `y = intercept + weights . x`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    /// Coefficient per feature.
    pub weights: Vec<f64>,
    /// Constant offset.
    pub intercept: f64,
}

impl LinearModel {
    /// Predicts for one feature row.
    ///
    /// # Errors
    ///
    /// [`SurrogateError::DimensionMismatch`] on a row of the wrong width.
    pub fn predict(&self, row: &[f64]) -> Result<f64, SurrogateError> {
        if row.len() != self.weights.len() {
            return Err(SurrogateError::DimensionMismatch {
                expected: self.weights.len(),
                got: row.len(),
            });
        }
        Ok(self.intercept + self.weights.iter().zip(row).map(|(w, x)| w * x).sum::<f64>())
    }
}

/// Fits least squares via the normal equations.
///
/// Solves exactly when the system is well-conditioned, so noiseless data is
/// reproduced to machine precision. If a pivot underflows the matrix scale —
/// collinear or constant features — the solve is retried once with a tiny
/// ridge (`1e-6`) on the feature diagonal.
///
/// # Errors
///
/// - [`SurrogateError::EmptyTrainingSet`] for zero rows.
/// - [`SurrogateError::LengthMismatch`] if `x` and `y` disagree in length.
/// - [`SurrogateError::DimensionMismatch`] on ragged feature rows.
/// - [`SurrogateError::NonFiniteInput`] on NaN or infinity.
/// - [`SurrogateError::DegenerateDesign`] if even the damped system is
///   singular.
pub fn train_linear(x: &[Vec<f64>], y: &[f64]) -> Result<LinearModel, SurrogateError> {
    if x.is_empty() {
        return Err(SurrogateError::EmptyTrainingSet);
    }
    if x.len() != y.len() {
        return Err(SurrogateError::LengthMismatch {
            x: x.len(),
            y: y.len(),
        });
    }
    let p = x[0].len();
    for row in x {
        if row.len() != p {
            return Err(SurrogateError::DimensionMismatch {
                expected: p,
                got: row.len(),
            });
        }
    }
    if x.iter().flatten().chain(y).any(|v| !v.is_finite()) {
        return Err(SurrogateError::NonFiniteInput);
    }

    // Normal equations over the design [1, x]: G w = b with
    // G = A^T A, b = A^T y, dimension p + 1 (intercept first).
    let dim = p + 1;
    let mut gram = vec![vec![0.0_f64; dim]; dim];
    let mut moment = vec![0.0_f64; dim];
    for (row, &target) in x.iter().zip(y) {
        let design_row = |k: usize| if k == 0 { 1.0 } else { row[k - 1] };
        for i in 0..dim {
            for j in 0..dim {
                gram[i][j] += design_row(i) * design_row(j);
            }
            moment[i] += design_row(i) * target;
        }
    }

    if let Some(solution) = solve(gram.clone(), moment.clone()) {
        return Ok(split(solution));
    }
    // Damp only the feature diagonal, leaving the intercept unpenalized.
    for (i, row) in gram.iter_mut().enumerate().skip(1) {
        row[i] += FALLBACK_RIDGE;
    }
    match solve(gram, moment) {
        Some(solution) => Ok(split(solution)),
        None => Err(SurrogateError::DegenerateDesign),
    }
}

fn split(mut solution: Vec<f64>) -> LinearModel {
    let intercept = solution.remove(0);
    LinearModel {
        weights: solution,
        intercept,
    }
}

/// Gaussian elimination with partial pivoting; `None` when a pivot
/// underflows the matrix scale.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = a
        .iter()
        .flatten()
        .fold(0.0_f64, |acc, &v| acc.max(v.abs()))
        .max(1.0);

    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r1, &r2| {
                a[r1][col]
                    .abs()
                    .partial_cmp(&a[r2][col].abs())
                    .expect("finite entries")
            })
            .expect("non-empty range");
        if a[pivot_row][col].abs() < PIVOT_RTOL * scale {
            return None;
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);

        for row in (col + 1)..n {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }

    let mut solution = vec![0.0_f64; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for col in (row + 1)..n {
            acc -= a[row][col] * solution[col];
        }
        solution[row] = acc / a[row][row];
    }
    Some(solution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn noiseless_line_is_recovered_exactly() {
        let x: Vec<Vec<f64>> = (0..6).map(|i| vec![i as f64]).collect();
        let y: Vec<f64> = x.iter().map(|r| 2.0 * r[0] + 1.0).collect();
        let model = train_linear(&x, &y).unwrap();
        assert_abs_diff_eq!(model.weights[0], 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(model.intercept, 1.0, epsilon = 1e-9);
        for (row, &target) in x.iter().zip(&y) {
            assert_abs_diff_eq!(model.predict(row).unwrap(), target, epsilon = 1e-9);
        }
    }

    #[test]
    fn two_feature_plane_is_recovered_exactly() {
        let x: Vec<Vec<f64>> = (0..8)
            .map(|i| vec![i as f64, ((i * i) % 5) as f64])
            .collect();
        let y: Vec<f64> = x.iter().map(|r| -0.5 * r[0] + 3.0 * r[1] - 2.0).collect();
        let model = train_linear(&x, &y).unwrap();
        assert_abs_diff_eq!(model.weights[0], -0.5, epsilon = 1e-9);
        assert_abs_diff_eq!(model.weights[1], 3.0, epsilon = 1e-9);
        assert_abs_diff_eq!(model.intercept, -2.0, epsilon = 1e-9);
    }

    #[test]
    fn collinear_features_fall_back_to_ridge() {
        // Second feature duplicates the first: the Gram matrix is singular,
        // but the damped solve must still predict well.
        let x: Vec<Vec<f64>> = (0..6).map(|i| vec![i as f64, i as f64]).collect();
        let y: Vec<f64> = x.iter().map(|r| 4.0 * r[0] + 1.0).collect();
        let model = train_linear(&x, &y).unwrap();
        for (row, &target) in x.iter().zip(&y) {
            assert_abs_diff_eq!(model.predict(row).unwrap(), target, epsilon = 1e-3);
        }
        // The duplicated weight splits between the twins.
        assert_abs_diff_eq!(model.weights[0] + model.weights[1], 4.0, epsilon = 1e-3);
    }

    #[test]
    fn input_validation() {
        assert!(matches!(
            train_linear(&[], &[]),
            Err(SurrogateError::EmptyTrainingSet)
        ));
        assert!(matches!(
            train_linear(&[vec![1.0]], &[1.0, 2.0]),
            Err(SurrogateError::LengthMismatch { .. })
        ));
        assert!(matches!(
            train_linear(&[vec![1.0], vec![1.0, 2.0]], &[1.0, 2.0]),
            Err(SurrogateError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            train_linear(&[vec![f64::NAN]], &[1.0]),
            Err(SurrogateError::NonFiniteInput)
        ));
    }

    #[test]
    fn prediction_dimension_is_checked() {
        let model = LinearModel {
            weights: vec![1.0, 2.0],
            intercept: 0.0,
        };
        assert!(matches!(
            model.predict(&[1.0]),
            Err(SurrogateError::DimensionMismatch { .. })
        ));
    }
}
