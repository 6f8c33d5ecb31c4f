//! Monomial moment system shared by the penalty objective, the polishing
//! step and the weight solve.

use crate::error::Result;
use std::collections::HashMap;

use crate::sphere_math::{moment_vector, monomials_of_degree, monomials_up_to, MultiIndex};

/// A list of monomials of degree at most `t` with their exact sphere moments.
///
/// Evaluation goes through a table of every monomial of degree `≤ t` in
/// ascending degree, each one a coordinate times an earlier entry, so values
/// cost one product apiece and `∂_k x^α = α_k x^{α - e_k}` is a lookup.
pub(crate) struct MomentSystem {
    pub n: usize,
    pub exps: Vec<Vec<u32>>,
    pub target: Vec<f64>,
    /// `(coordinate, parent entry)` for each table entry past the constant.
    parents: Vec<(usize, usize)>,
    /// Table entry of each system row.
    rows: Vec<usize>,
    /// Nonzero partials as `(row, coordinate, α_k, table entry of α - e_k)`.
    partials: Vec<(usize, usize, f64, usize)>,
}

impl MomentSystem {
    pub fn new(n: usize, t: u32, min_degree: u32) -> Result<Self> {
        let monomials: Vec<MultiIndex> = monomials_up_to(n, t)
            .into_iter()
            .filter(|a| a.degree() >= min_degree)
            .collect();
        Self::from_monomials(n, t, monomials)
    }

    /// Homogeneous degrees `t` and `t - 1` only: linearly independent on the
    /// sphere and spanning every polynomial of degree at most `t`, the
    /// constant included.
    pub fn independent(n: usize, t: u32) -> Result<Self> {
        Self::from_monomials(n, t, crate::measures::reduction_basis(n, t))
    }

    fn from_monomials(n: usize, t: u32, monomials: Vec<MultiIndex>) -> Result<Self> {
        let target = moment_vector(n, &monomials)?;
        let table: Vec<Vec<u32>> = (0..=t).flat_map(|d| monomials_of_degree(n, d)).map(|a| a.0).collect();
        let index: HashMap<&[u32], usize> = table.iter().enumerate().map(|(i, a)| (a.as_slice(), i)).collect();
        let lower = |a: &[u32], k: usize| {
            let mut b = a.to_vec();
            b[k] -= 1;
            index[b.as_slice()]
        };
        let parents = table[1..]
            .iter()
            .map(|a| {
                let k = a.iter().position(|&e| e > 0).expect("positive degree");
                (k, lower(a, k))
            })
            .collect();
        let exps: Vec<Vec<u32>> = monomials.into_iter().map(|a| a.0).collect();
        let rows = exps.iter().map(|a| index[a.as_slice()]).collect();
        let mut partials = Vec::new();
        for (row, a) in exps.iter().enumerate() {
            for k in (0..n).filter(|&k| a[k] > 0) {
                partials.push((row, k, a[k] as f64, lower(a, k)));
            }
        }
        Ok(MomentSystem { n, exps, target, parents, rows, partials })
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    /// Every monomial of degree `≤ t` at `x`; feed to [`Self::row_values`]
    /// and [`Self::weighted_gradient`].
    pub fn table(&self, x: &[f64]) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.parents.len() + 1);
        v.push(1.0);
        for &(k, p) in &self.parents {
            v.push(x[k] * v[p]);
        }
        v
    }

    /// Monomial values at `x`.
    pub fn values(&self, x: &[f64]) -> Vec<f64> {
        let v = self.table(x);
        self.rows.iter().map(|&i| v[i]).collect()
    }

    pub fn row_values<'a>(&'a self, table: &'a [f64]) -> impl Iterator<Item = f64> + 'a {
        self.rows.iter().map(move |&i| table[i])
    }

    /// `∇_x Σ_row c_row m_row(x)` written into `out`.
    pub fn weighted_gradient(&self, table: &[f64], coeffs: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        for &(row, k, a, i) in &self.partials {
            out[k] += coeffs[row] * a * table[i];
        }
    }

    /// Monomial values and their gradients (row-major `len × n`) at `x`.
    pub fn values_and_gradients(&self, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let n = self.n;
        let v = self.table(x);
        let vals = self.row_values(&v).collect();
        let mut grads = vec![0.0; self.len() * n];
        for &(row, k, a, i) in &self.partials {
            grads[row * n + k] = a * v[i];
        }
        (vals, grads)
    }

    /// `Σ_i w_i m_α(x_i) - M_α`.
    pub fn residual(&self, points: &[Vec<f64>], weights: &[f64]) -> Vec<f64> {
        let mut r: Vec<f64> = self.target.iter().map(|m| -m).collect();
        for (p, w) in points.iter().zip(weights) {
            for (ri, v) in r.iter_mut().zip(self.values(p)) {
                *ri += w * v;
            }
        }
        r
    }
}


pub(crate) fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}
