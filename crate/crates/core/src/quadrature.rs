//! Gauss quadrature for the Gegenbauer weight `(1 - s²)^{(n-3)/2}` on `[-1, 1]`,
//! which is the distribution of `<x, e>` for `x` uniform on `S^{n-1}`.

use nalgebra::{DMatrix, SymmetricEigen};

/// Nodes and weights, weights normalized to sum to one.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// `count`-point Gauss rule for the normalized projection of σ on `S^{n-1}`;
/// exact for polynomials of degree `2 count - 1`.
///
/// Golub–Welsch on the symmetric Jacobi matrix with `α = β = (n-3)/2`.
pub fn gauss_gegenbauer(n: usize, count: usize) -> GaussRule {
    assert!(n >= 2 && count >= 1);
    let a = (n as f64 - 3.0) / 2.0;
    let mut jacobi = DMatrix::<f64>::zeros(count, count);
    for k in 1..count {
        let kf = k as f64;
        // Monic recurrence coefficient; the k = 1 case is E[s²] = 1/n, which
        // also covers the removable singularity at n = 2.
        let beta = if k == 1 {
            1.0 / n as f64
        } else {
            kf * (kf + 2.0 * a) / ((2.0 * kf + 2.0 * a + 1.0) * (2.0 * kf + 2.0 * a - 1.0))
        };
        let b = beta.sqrt();
        jacobi[(k - 1, k)] = b;
        jacobi[(k, k - 1)] = b;
    }
    let eig = SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..count)
        .map(|i| (eig.eigenvalues[i], eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    GaussRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1 / total).collect(),
    }
}
