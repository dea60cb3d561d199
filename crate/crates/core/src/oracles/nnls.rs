// Copyright 2026 The accred Authors
// SPDX-License-Identifier: Apache-2.0

//! Non-negative least squares (active-set method of Lawson and Hanson).

use nalgebra::{DMatrix, DVector};

/// Result of [`nnls`].
#[derive(Clone, Debug, PartialEq)]
pub struct NnlsSolution {
    pub x: DVector<f64>,
    /// Euclidean norm of `A x - b`.
    pub residual: f64,
    pub iterations: usize,
}

fn solve_passive(a: &DMatrix<f64>, b: &DVector<f64>, passive: &[usize]) -> DVector<f64> {
    let sub = a.select_columns(passive);
    let svd = sub.svd(true, true);
    svd.solve(b, 1e-13).expect("SVD computed with U and V")
}

/// Minimises `|A x - b|` subject to `x >= 0`.
pub fn nnls(a: &DMatrix<f64>, b: &DVector<f64>, max_iterations: usize) -> NnlsSolution {
    let n = a.ncols();
    let mut x = DVector::<f64>::zeros(n);
    let mut passive = vec![false; n];
    let tol = 1e-14 * a.iter().fold(1.0f64, |m, v| m.max(v.abs())) * (a.nrows() as f64);
    let mut iterations = 0;
    loop {
        let w = a.transpose() * (b - a * &x);
        let candidate = (0..n)
            .filter(|&j| !passive[j] && w[j] > tol)
            .max_by(|&i, &j| w[i].total_cmp(&w[j]));
        let Some(j) = candidate else { break };
        if iterations >= max_iterations {
            break;
        }
        passive[j] = true;
        loop {
            iterations += 1;
            let idx: Vec<usize> = (0..n).filter(|&k| passive[k]).collect();
            let s = solve_passive(a, b, &idx);
            if s.iter().all(|&v| v > 0.0) {
                for (k, &col) in idx.iter().enumerate() {
                    x[col] = s[k];
                }
                break;
            }
            // Step toward s until the first passive coordinate hits zero.
            let mut alpha = f64::INFINITY;
            for (k, &col) in idx.iter().enumerate() {
                if s[k] <= 0.0 {
                    let denom = x[col] - s[k];
                    if denom > 0.0 {
                        alpha = alpha.min(x[col] / denom);
                    }
                }
            }
            if !alpha.is_finite() {
                alpha = 0.0;
            }
            for (k, &col) in idx.iter().enumerate() {
                x[col] += alpha * (s[k] - x[col]);
                if x[col] <= 1e-15 {
                    x[col] = 0.0;
                    passive[col] = false;
                }
            }
            if iterations >= max_iterations || !passive.iter().any(|&p| p) {
                break;
            }
        }
    }
    let residual = (a * &x - b).norm();
    NnlsSolution {
        x,
        residual,
        iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_nonnegative_solution() {
        let a = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        let b = DVector::from_vec(vec![0.3, 0.7, 1.0]);
        let s = nnls(&a, &b, 100);
        assert!((s.x[0] - 0.3).abs() < 1e-12 && (s.x[1] - 0.7).abs() < 1e-12);
        assert!(s.residual < 1e-12);
    }

    #[test]
    fn clips_negative_directions() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0]);
        let b = DVector::from_vec(vec![-1.0, 2.0]);
        let s = nnls(&a, &b, 100);
        assert_eq!(s.x[0], 0.0);
        assert!((s.x[1] - 2.0).abs() < 1e-12);
        assert!((s.residual - 1.0).abs() < 1e-12);
    }
}
