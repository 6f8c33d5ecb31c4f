//! Independent oracles shared by the integration tests.
//!
//! Nothing here calls the closed-form moment or kernel code under test:
//! sphere moments come from Gaussian integrals evaluated by Gauss–Hermite
//! quadrature, reproducing kernels from a Gram matrix of monomials, and
//! zonal polynomials from the classical three-term recurrences.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Gauss–Hermite rule for the standard normal density, by Golub–Welsch.
pub fn gauss_hermite(m: usize) -> (Vec<f64>, Vec<f64>) {
    let jacobi = DMatrix::from_fn(m, m, |i, j| {
        if i + 1 == j || j + 1 == i {
            (i.max(j) as f64).sqrt()
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(jacobi);
    let nodes = eig.eigenvalues.iter().copied().collect();
    let weights = (0..m).map(|k| eig.eigenvectors[(0, k)].powi(2)).collect();
    (nodes, weights)
}

const GH_NODES: usize = 12;

/// `E[g^k]` for a standard normal `g`.
pub fn normal_moment(k: u32) -> f64 {
    let (x, w) = gauss_hermite(GH_NODES);
    x.iter().zip(&w).map(|(x, w)| w * x.powi(k as i32)).sum()
}

/// `E[|g|^{2k}]` for a standard normal vector in `R^n`, by brute force on
/// the tensor-product Gauss–Hermite grid.
pub fn radial_moment(n: usize, k: u32) -> f64 {
    let (x, w) = gauss_hermite(GH_NODES);
    let mut idx = vec![0usize; n];
    let mut total = 0.0;
    loop {
        let r2: f64 = idx.iter().map(|&i| x[i] * x[i]).sum();
        let weight: f64 = idx.iter().map(|&i| w[i]).product();
        total += weight * r2.powi(k as i32);
        let mut d = 0;
        loop {
            if d == n {
                return total;
            }
            idx[d] += 1;
            if idx[d] < GH_NODES {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}

/// `∫ x^α dσ` over the unit sphere in `R^n`, via `g = |g| ξ` with `|g|`
/// independent of `ξ`.
pub fn sphere_moment(n: usize, alpha: &[u32]) -> f64 {
    assert_eq!(alpha.len(), n);
    let numerator: f64 = alpha.iter().map(|&a| normal_moment(a)).product();
    if alpha.iter().any(|a| a % 2 == 1) {
        assert!(numerator.abs() < 1e-12, "odd Gaussian moment {numerator}");
        return 0.0;
    }
    let degree: u32 = alpha.iter().sum();
    numerator / radial_moment(n, degree / 2)
}

/// All exponent vectors in `R^n` of total degree exactly `d`.
pub fn exponents(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![d]];
    }
    (0..=d)
        .rev()
        .flat_map(|first| {
            exponents(n - 1, d - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

pub fn eval_monomial(alpha: &[u32], x: &[f64]) -> f64 {
    alpha.iter().zip(x).map(|(&a, &v)| v.powi(a as i32)).product()
}

/// Reproducing kernel of the span of `monomials` in `L²(σ)`:
/// `K(x, y) = m(x)ᵀ G⁻¹ m(y)` with `G` the Gram matrix of an independent set.
pub struct GramKernel {
    monomials: Vec<Vec<u32>>,
    inverse: DMatrix<f64>,
}

impl GramKernel {
    pub fn new(n: usize, monomials: Vec<Vec<u32>>) -> Self {
        let k = monomials.len();
        let gram = DMatrix::from_fn(k, k, |i, j| {
            let sum: Vec<u32> = monomials[i].iter().zip(&monomials[j]).map(|(a, b)| a + b).collect();
            sphere_moment(n, &sum)
        });
        let inverse = gram.cholesky().expect("monomials independent on the sphere").inverse();
        GramKernel { monomials, inverse }
    }

    /// Polynomials of degree at most `d`. On the sphere `|x|² = 1`, so degrees
    /// `d` and `d - 1` already span them without redundancy.
    pub fn full(n: usize, d: u32) -> Self {
        let mut basis = exponents(n, d);
        if d > 0 {
            basis.extend(exponents(n, d - 1));
        }
        Self::new(n, basis)
    }

    /// Homogeneous polynomials of degree `d`, restricted to the sphere.
    pub fn homogeneous(n: usize, d: u32) -> Self {
        Self::new(n, exponents(n, d))
    }

    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        let mx = DVector::from_iterator(self.monomials.len(), self.monomials.iter().map(|a| eval_monomial(a, x)));
        let my = DVector::from_iterator(self.monomials.len(), self.monomials.iter().map(|a| eval_monomial(a, y)));
        mx.dot(&(&self.inverse * my))
    }
}

/// Legendre `P_k(s)` by Bonnet's recurrence.
pub fn legendre(k: u32, s: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, s);
    if k == 0 {
        return 1.0;
    }
    for j in 1..k {
        let j = j as f64;
        let p2 = ((2.0 * j + 1.0) * s * p1 - j * p0) / (j + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Chebyshev polynomial of the second kind `U_k(s)`.
pub fn chebyshev_u(k: u32, s: f64) -> f64 {
    let (mut u0, mut u1) = (1.0, 2.0 * s);
    if k == 0 {
        return 1.0;
    }
    for _ in 1..k {
        let u2 = 2.0 * s * u1 - u0;
        u0 = u1;
        u1 = u2;
    }
    u1
}

/// Zonal harmonic `Q_k` normalized to `Q_k(1) = dim H_k`, for `n ∈ {2, 3, 4}`
/// from classical families.
pub fn classical_zonal(n: usize, k: u32, s: f64) -> f64 {
    match n {
        2 if k == 0 => 1.0,
        2 => 2.0 * (k as f64 * s.clamp(-1.0, 1.0).acos()).cos(),
        3 => (2 * k + 1) as f64 * legendre(k, s),
        4 => (k + 1) as f64 * chebyshev_u(k, s),
        _ => panic!("no classical oracle for n = {n}"),
    }
}

/// `C(a, b)` by the multiplicative formula in `u128`.
pub fn choose(a: u64, b: u64) -> u64 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut r: u128 = 1;
    for i in 0..b {
        r = r * (a - i) as u128 / (i + 1) as u128;
    }
    r as u64
}

/// Deterministic pseudo-random unit vector from a simple LCG, independent of
/// the library's samplers.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn uniform(&mut self) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((self.0 >> 11) as f64) / ((1u64 << 53) as f64)
    }

    pub fn unit(&mut self, n: usize) -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..n).map(|_| 2.0 * self.uniform() - 1.0).collect();
            let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if r > 0.1 && r <= 1.0 {
                return v.iter().map(|x| x / r).collect();
            }
        }
    }
}
