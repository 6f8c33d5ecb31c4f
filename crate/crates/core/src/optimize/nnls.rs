//! Lawson–Hanson non-negative least squares.

use nalgebra::{DMatrix, DVector};

fn solve_passive(a: &DMatrix<f64>, b: &DVector<f64>, passive: &[usize]) -> DVector<f64> {
    let sub = DMatrix::from_fn(a.nrows(), passive.len(), |i, j| a[(i, passive[j])]);
    let svd = sub.svd(true, true);
    svd.solve(b, 1e-13 * svd.singular_values.max().max(1.0))
        .unwrap_or_else(|_| DVector::zeros(passive.len()))
}

/// `argmin_{x ≥ 0} |A x - b|`.
pub(crate) fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let cols = a.ncols();
    let mut x = DVector::<f64>::zeros(cols);
    let mut passive = vec![false; cols];
    let tol = 1e-12 * a.amax().max(1.0) * cols as f64;

    for _ in 0..3 * cols + 10 {
        let w = a.transpose() * (b - a * &x);
        let candidate = (0..cols)
            .filter(|&j| !passive[j] && w[j] > tol)
            .max_by(|&i, &j| w[i].total_cmp(&w[j]));
        let Some(j) = candidate else { break };
        passive[j] = true;

        loop {
            let idx: Vec<usize> = (0..cols).filter(|&k| passive[k]).collect();
            let z = solve_passive(a, b, &idx);
            if z.iter().all(|v| *v > 0.0) {
                for (k, &col) in idx.iter().enumerate() {
                    x[col] = z[k];
                }
                break;
            }
            // Step toward z until the first passive coordinate hits zero.
            let mut alpha = f64::INFINITY;
            for (k, &col) in idx.iter().enumerate() {
                if z[k] <= 0.0 {
                    alpha = alpha.min(x[col] / (x[col] - z[k]));
                }
            }
            for (k, &col) in idx.iter().enumerate() {
                x[col] += alpha * (z[k] - x[col]);
                if x[col] <= 1e-15 {
                    x[col] = 0.0;
                    passive[col] = false;
                }
            }
            if !passive.iter().any(|p| *p) {
                break;
            }
        }
    }
    x
}
