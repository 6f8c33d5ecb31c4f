//! Reproducing kernels of rotation-invariant polynomial spaces on `S^{n-1}`.
//!
//! Every such kernel is zonal: `K(x, y) = Q(<x, y>)`. The building blocks are
//! the harmonic kernels `Q_k`, rescaled Gegenbauer polynomials with parameter
//! `λ = (n-2)/2` normalized so that `Q_k(1) = dim H_k`. On the circle (`λ = 0`)
//! they are `Q_k(cos φ) = 2 cos(kφ)` for `k ≥ 1`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::measures::{dot, DiscreteMeasure};
use crate::poly::Polynomial;
use crate::quadrature::gauss_gegenbauer;
use crate::sphere_math;

const DOMAIN_TOL: f64 = 1e-12;

fn check_args(n: usize, s: f64) -> Result<f64> {
    if n < 2 {
        return Err(invalid(format!("ambient dimension must be at least 2, got {n}")));
    }
    if !(s.abs() <= 1.0 + DOMAIN_TOL) {
        return Err(invalid(format!("inner product {s} outside [-1, 1]")));
    }
    Ok(s.clamp(-1.0, 1.0))
}

/// `Q_0(s), ..., Q_d(s)` by the three-term recurrence. No argument checks.
pub fn zonal_kernels_upto(n: usize, d: u32, s: f64) -> Vec<f64> {
    let d = d as usize;
    let mut out = Vec::with_capacity(d + 1);
    out.push(1.0);
    if d == 0 {
        return out;
    }
    if n == 2 {
        // Chebyshev: T_k = 2 s T_{k-1} - T_{k-2}, Q_k = 2 T_k.
        let (mut prev, mut cur) = (1.0, s);
        out.push(2.0 * cur);
        for _ in 2..=d {
            let next = 2.0 * s * cur - prev;
            prev = cur;
            cur = next;
            out.push(2.0 * cur);
        }
        return out;
    }
    let lambda = (n as f64 - 2.0) / 2.0;
    // Gegenbauer C_k^λ, then Q_k = (k + λ)/λ · C_k^λ.
    let (mut prev, mut cur) = (1.0, 2.0 * lambda * s);
    out.push((1.0 + lambda) / lambda * cur);
    for k in 2..=d {
        let kf = k as f64;
        let next = (2.0 * s * (kf + lambda - 1.0) * cur - (kf + 2.0 * lambda - 2.0) * prev) / kf;
        prev = cur;
        cur = next;
        out.push((kf + lambda) / lambda * cur);
    }
    out
}

/// `Q_k(s)`, the reproducing kernel of the degree-`k` harmonics at inner product `s`.
pub fn zonal_kernel(n: usize, k: u32, s: f64) -> Result<f64> {
    let s = check_args(n, s)?;
    Ok(zonal_kernels_upto(n, k, s)[k as usize])
}

/// `Q_0, ..., Q_d` as polynomials in `s`.
pub fn zonal_kernel_polys(n: usize, d: u32) -> Vec<Polynomial> {
    let s = Polynomial::s();
    let mut out = vec![Polynomial::constant(1.0)];
    if d == 0 {
        return out;
    }
    if n == 2 {
        let (mut prev, mut cur) = (Polynomial::constant(1.0), s.clone());
        out.push(cur.scale(2.0));
        for _ in 2..=d {
            let next = s.mul(&cur).scale(2.0).add(&prev.scale(-1.0));
            prev = cur;
            cur = next;
            out.push(cur.scale(2.0));
        }
        return out;
    }
    let lambda = (n as f64 - 2.0) / 2.0;
    let (mut prev, mut cur) = (Polynomial::constant(1.0), s.scale(2.0 * lambda));
    out.push(cur.scale((1.0 + lambda) / lambda));
    for k in 2..=d {
        let kf = k as f64;
        let next = s
            .mul(&cur)
            .scale(2.0 * (kf + lambda - 1.0) / kf)
            .add(&prev.scale(-(kf + 2.0 * lambda - 2.0) / kf));
        prev = cur;
        cur = next;
        out.push(cur.scale((kf + lambda) / lambda));
    }
    out
}

/// Which rotation-invariant polynomial space a kernel reproduces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "degree")]
pub enum Space {
    /// Spherical harmonics `H_k` of degree exactly `k`.
    Harmonic(u32),
    /// All polynomials of degree at most `t`, `P_t`.
    FullPoly(u32),
    /// Homogeneous polynomials of degree `t` restricted to the sphere, `P_t^(h)`.
    HomogPoly(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub n: usize,
    pub space: Space,
}

impl KernelSpec {
    pub fn new(n: usize, space: Space) -> Result<Self> {
        if n < 2 {
            return Err(invalid(format!("ambient dimension must be at least 2, got {n}")));
        }
        Ok(KernelSpec { n, space })
    }

    pub fn max_degree(&self) -> u32 {
        match self.space {
            Space::Harmonic(k) | Space::FullPoly(k) | Space::HomogPoly(k) => k,
        }
    }

    /// Harmonic degrees whose kernels sum to this one.
    pub fn harmonic_degrees(&self) -> Vec<u32> {
        match self.space {
            Space::Harmonic(k) => vec![k],
            Space::FullPoly(t) => (0..=t).collect(),
            Space::HomogPoly(t) => (0..=t).filter(|k| (t - k) % 2 == 0).collect(),
        }
    }

    /// Dimension of the space, which equals the kernel on the diagonal.
    pub fn dimension(&self) -> Result<u64> {
        match self.space {
            Space::Harmonic(k) => sphere_math::dim_harmonic(self.n, k),
            Space::FullPoly(t) => sphere_math::dim_full(self.n, t),
            Space::HomogPoly(t) => sphere_math::dim_homogeneous(self.n, t),
        }
    }

    pub fn polynomial(&self) -> Polynomial {
        let polys = zonal_kernel_polys(self.n, self.max_degree());
        self.harmonic_degrees()
            .into_iter()
            .fold(Polynomial::constant(0.0), |acc, k| acc.add(&polys[k as usize]))
    }
}

/// `K(x, y)` for the space in `spec`, as a function of `s = <x, y>`.
pub fn kernel_eval(spec: &KernelSpec, s: f64) -> Result<f64> {
    let s = check_args(spec.n, s)?;
    let q = zonal_kernels_upto(spec.n, spec.max_degree(), s);
    Ok(spec.harmonic_degrees().into_iter().map(|k| q[k as usize]).sum())
}

/// Expansion `F = Σ b_k Q_k` of a function of the inner product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZonalSeries {
    pub n: usize,
    pub coeffs: Vec<f64>,
}

impl ZonalSeries {
    /// `b_0 = ∫ F dμ_n`.
    pub fn a0(&self) -> f64 {
        self.coeffs.first().copied().unwrap_or(0.0)
    }

    pub fn eval(&self, s: f64) -> f64 {
        let q = zonal_kernels_upto(self.n, self.coeffs.len().saturating_sub(1) as u32, s);
        self.coeffs.iter().zip(q).map(|(b, q)| b * q).sum()
    }
}

/// Projects a polynomial onto the harmonic kernels.
///
/// `b_k = ∫ F Q_k dμ_n / dim H_k` using a Gauss rule with enough nodes to be
/// exact for `F · Q_k`.
pub fn zonal_project(f: &Polynomial, n: usize) -> Result<ZonalSeries> {
    if n < 2 {
        return Err(invalid(format!("ambient dimension must be at least 2, got {n}")));
    }
    let d = f.degree() as u32;
    let nodes = (2 * d as usize).div_ceil(2) + 1;
    let rule = gauss_gegenbauer(n, nodes);
    let q_at_nodes: Vec<Vec<f64>> = rule.nodes.iter().map(|&s| zonal_kernels_upto(n, d, s)).collect();
    let f_at_nodes: Vec<f64> = rule.nodes.iter().map(|&s| f.eval(s)).collect();
    let coeffs = (0..=d)
        .map(|k| {
            let integral: f64 = rule
                .weights
                .iter()
                .zip(&f_at_nodes)
                .zip(&q_at_nodes)
                .map(|((w, fv), q)| w * fv * q[k as usize])
                .sum();
            Ok(integral / sphere_math::dim_harmonic(n, k)? as f64)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ZonalSeries { n, coeffs })
}

/// `Σ_{i,j} ν_i ν_j Q_k(<ξ_i, ξ_j>)`, non-negative by positive-definiteness.
pub fn pairwise_energy(measure: &DiscreteMeasure, k: u32) -> f64 {
    let n = measure.dimension();
    let pts = measure.points();
    let w = measure.weights();
    let mut total = 0.0;
    for i in 0..pts.len() {
        total += w[i] * w[i] * zonal_kernels_upto(n, k, 1.0)[k as usize];
        for j in 0..i {
            let s = dot(&pts[i], &pts[j]).clamp(-1.0, 1.0);
            total += 2.0 * w[i] * w[j] * zonal_kernels_upto(n, k, s)[k as usize];
        }
    }
    total
}
