//! Bounds on `Θ(t, θ, n) = min { Σ ν_i^θ : ν a strength-t cubature on S^{n-1} }`
//! and Delsarte-style linear-programming certificates.

use serde::{Deserialize, Serialize};

use crate::designs;
use crate::error::{invalid, Result};
use crate::kernels::{zonal_project, ZonalSeries};
use crate::measures::{reduce_support_with, theta_norm, DiscreteMeasure, StepRule};
use crate::poly::Polynomial;
use crate::sphere_math;

fn check(t: u32, theta: f64, n: usize) -> Result<()> {
    if t < 1 {
        return Err(invalid("strength must be at least 1"));
    }
    if !(0.0..1.0).contains(&theta) {
        return Err(invalid(format!("theta must lie in [0, 1), got {theta}")));
    }
    if n < 2 {
        return Err(invalid(format!("ambient dimension must be at least 2, got {n}")));
    }
    Ok(())
}

/// `N̲(t, n)^{1-θ}`: every weight is at most `1/N̲`, so `Σ ν_i^θ ≥ N̲^{1-θ}`.
pub fn theta_lower(t: u32, theta: f64, n: usize) -> Result<f64> {
    check(t, theta, n)?;
    Ok((sphere_math::cardinality_lower(t, n)? as f64).powf(1.0 - theta))
}

/// Known exact values: antipodal pair (`t = 1`), simplex (`t = 2`),
/// cross-polytope (`t = 3`) and the regular `(t+1)`-gon on the circle.
pub fn theta_exact(t: u32, theta: f64, n: usize) -> Result<Option<f64>> {
    check(t, theta, n)?;
    let e = 1.0 - theta;
    let value = if n == 2 {
        Some((t as f64 + 1.0).powf(e))
    } else {
        match t {
            1 => Some(2f64.powf(e)),
            2 => Some((n as f64 + 1.0).powf(e)),
            3 => Some((2.0 * n as f64).powf(e)),
            _ => None,
        }
    };
    Ok(value)
}

/// Best constructive witness for strength `t`: a tight family when one
/// exists, otherwise a product rule pruned toward small `Σ ν_i^θ`.
pub fn upper_witness(t: u32, theta: f64, n: usize) -> Result<DiscreteMeasure> {
    check(t, theta, n)?;
    if n == 2 {
        return designs::circle_points(t as usize + 1, 0.0);
    }
    match t {
        1 => designs::antipodal_pair(n, None),
        2 => designs::simplex(n),
        3 => designs::cross_polytope(n, None),
        _ => {
            let product = designs::product_cubature(n, t)?;
            reduce_support_with(&product, t, 1e-10, 0, StepRule::MinTheta(theta))
        }
    }
}

/// Upper bound on `Θ` together with the measure attaining it, if any.
///
/// The witness is returned only when it beats the Hölder cap `N̄(t, n)^{1-θ}`;
/// otherwise the cap is reported without a witness.
pub fn theta_upper(t: u32, theta: f64, n: usize) -> Result<(f64, Option<DiscreteMeasure>)> {
    check(t, theta, n)?;
    let witness = upper_witness(t, theta, n)?;
    let value = theta_norm(&witness, theta)?;
    let tight = n == 2 || t <= 3;
    if tight {
        return Ok((value, Some(witness)));
    }
    let cap = hoelder_cap(t, theta, n)?;
    if value <= cap {
        Ok((value, Some(witness)))
    } else {
        Ok((cap, None))
    }
}

/// `N̄(t, n)^{1-θ}`.
pub fn hoelder_cap(t: u32, theta: f64, n: usize) -> Result<f64> {
    check(t, theta, n)?;
    Ok((sphere_math::cardinality_upper(t, n)? as f64).powf(1.0 - theta))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThetaBounds {
    pub t: u32,
    pub theta: f64,
    pub n: usize,
    pub lower: f64,
    pub upper: f64,
    pub exact: Option<f64>,
    pub witness: Option<DiscreteMeasure>,
    /// `N̄(t, n)^{1-θ}`, valid whether or not a witness was built.
    pub cardinality_cap: f64,
    /// `(2^{n-1} / (n-1)!)^{1-θ}`: asymptotic bound on `Θ / t^{(n-1)(1-θ)}` as
    /// `t → ∞`. Informational only.
    pub asymptotic_constant_fixed_n: f64,
}

pub fn theta_bounds(t: u32, theta: f64, n: usize) -> Result<ThetaBounds> {
    let lower = theta_lower(t, theta, n)?;
    let exact = theta_exact(t, theta, n)?;
    let (upper, witness) = theta_upper(t, theta, n)?;
    let factorial: f64 = (1..n).map(|k| k as f64).product();
    Ok(ThetaBounds {
        t,
        theta,
        n,
        lower,
        upper,
        exact,
        witness,
        cardinality_cap: hoelder_cap(t, theta, n)?,
        asymptotic_constant_fixed_n: (2f64.powi(n as i32 - 1) / factorial).powf(1.0 - theta),
    })
}

/// Outcome of testing `F` as an LP test function for strength `t`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LpCertificate {
    pub series: ZonalSeries,
    pub strength: u32,
    pub n: usize,
    pub a0: f64,
    /// `F(1)`.
    pub peak: f64,
    /// Minimum of `F` on `[-1, 1]` found by grid search plus local refinement.
    pub min_value: f64,
    pub nonnegative: bool,
    /// `b_k ≤ 0` for every `k > t`.
    pub sign_condition: bool,
    pub positive_normalization: bool,
    /// `F(1) / a_0`, a lower bound on the support size.
    pub cardinality_bound: Option<f64>,
    /// `a_0 / F(1)`, an upper bound on `Σ ν_i²`.
    pub sum_squares_bound: Option<f64>,
}

impl LpCertificate {
    pub fn is_valid(&self) -> bool {
        self.nonnegative && self.sign_condition && self.positive_normalization
    }
}

const GRID: usize = 10_001;
const NONNEG_TOL: f64 = -1e-10;
const SIGN_TOL: f64 = 1e-12;

/// Golden-section minimization on `[a, b]`.
fn golden_min(f: &Polynomial, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    for _ in 0..100 {
        if f.eval(c) < f.eval(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
        if (b - a).abs() < 1e-15 {
            break;
        }
    }
    f.eval((a + b) / 2.0)
}

/// Numerical minimum of `F` on `[-1, 1]`.
fn minimum_on_interval(f: &Polynomial) -> f64 {
    let xs: Vec<f64> = (0..GRID).map(|i| -1.0 + 2.0 * i as f64 / (GRID - 1) as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f.eval(x)).collect();
    let mut best = ys.iter().copied().fold(f64::INFINITY, f64::min);
    for i in 1..GRID - 1 {
        if ys[i] <= ys[i - 1] && ys[i] <= ys[i + 1] {
            best = best.min(golden_min(f, xs[i - 1], xs[i + 1]));
        }
    }
    best
}

pub fn lp_bound(f: &Polynomial, t: u32, n: usize) -> Result<LpCertificate> {
    if t < 1 {
        return Err(invalid("strength must be at least 1"));
    }
    let series = zonal_project(f, n)?;
    let a0 = series.a0();
    let peak = f.eval(1.0);
    let min_value = minimum_on_interval(f);
    let nonnegative = min_value >= NONNEG_TOL;
    let sign_condition = series.coeffs.iter().skip(t as usize + 1).all(|b| *b <= SIGN_TOL);
    let positive_normalization = a0 > 0.0 && peak > 0.0;
    let valid = nonnegative && sign_condition && positive_normalization;
    Ok(LpCertificate {
        strength: t,
        n,
        a0,
        peak,
        min_value,
        nonnegative,
        sign_condition,
        positive_normalization,
        cardinality_bound: valid.then(|| peak / a0),
        sum_squares_bound: valid.then(|| a0 / peak),
        series,
    })
}
