//! Certificates: cubature strength, weight bounds, tightness.

use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{dot, DiscreteMeasure, MERGE_TOL};
use crate::sphere_math::{self, monomials_of_degree, rational_to_f64};

/// Default tolerance on moment residuals.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Per-degree moment residuals against the uniform measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrengthReport {
    pub strength: u32,
    pub tol: f64,
    /// `residuals[d-1]` is the max over `|α| = d` of `|Σ ν_i ξ_i^α - ∫ x^α dσ|`.
    pub residuals: Vec<f64>,
    pub degree_pass: Vec<bool>,
    pub pass: bool,
}

impl StrengthReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// Residual at degree `d` (1-based).
    pub fn residual(&self, d: u32) -> f64 {
        self.residuals[d as usize - 1]
    }
}

/// Max moment residual at exactly degree `d`.
pub fn degree_residual(measure: &DiscreteMeasure, d: u32) -> f64 {
    let n = measure.dimension();
    let monomials = monomials_of_degree(n, d);
    monomials
        .par_iter()
        .map(|alpha| {
            let exact = rational_to_f64(&sphere_math::monomial_moment(n, alpha).expect("dimension checked"));
            (measure.integrate_monomial(alpha) - exact).abs()
        })
        .reduce(|| 0.0, f64::max)
}

/// Compares every monomial moment of degree `1..=strength` with the sphere.
pub fn verify_strength(measure: &DiscreteMeasure, strength: u32, tol: f64) -> StrengthReport {
    let residuals: Vec<f64> = (1..=strength).map(|d| degree_residual(measure, d)).collect();
    let degree_pass: Vec<bool> = residuals.iter().map(|r| *r <= tol).collect();
    let pass = degree_pass.iter().all(|p| *p);
    StrengthReport { strength, tol, residuals, degree_pass, pass }
}

/// Largest `t ≤ t_max` at which the measure passes; zero if degree 1 fails.
pub fn max_strength(measure: &DiscreteMeasure, t_max: u32, tol: f64) -> u32 {
    let mut t = 0;
    for d in 1..=t_max {
        if degree_residual(measure, d) > tol {
            break;
        }
        t = d;
    }
    t
}

/// Per-atom margins against the bound `ν_i ≤ 1 / N̲(m, n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightAudit {
    pub strength: u32,
    pub n: usize,
    /// `N̲(m, n)`; the bound is its reciprocal.
    pub lower_cardinality: u64,
    pub bound: f64,
    /// `bound - ν_i`, in support order.
    pub margins: Vec<f64>,
    /// Odd strength only: for atoms at the bound, whether the antipode is also at the bound.
    pub antipodal_equality: Vec<Option<bool>>,
    pub violations: usize,
    /// True when some weight exceeds the bound, which proves the measure is
    /// not a cubature formula of this strength.
    pub certified_non_member: bool,
}

impl WeightAudit {
    pub fn min_margin(&self) -> f64 {
        self.margins.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Atoms at the bound whose antipode is not.
    pub fn equality_failures(&self) -> usize {
        self.antipodal_equality.iter().filter(|f| **f == Some(false)).count()
    }
}

const AT_BOUND_TOL: f64 = 1e-9;

pub fn audit_weights(measure: &DiscreteMeasure, strength: u32) -> Result<WeightAudit> {
    let n = measure.dimension();
    let lower = sphere_math::cardinality_lower(strength, n)?;
    let bound = rational_to_f64(&(BigRational::one() / BigRational::from_integer(lower.into())));
    let margins: Vec<f64> = measure.weights().iter().map(|w| bound - w).collect();
    let odd = strength % 2 == 1;
    let antipodal_equality = measure
        .atoms()
        .zip(&margins)
        .map(|((p, _), margin)| {
            if !odd || margin.abs() > AT_BOUND_TOL {
                return None;
            }
            let minus: Vec<f64> = p.iter().map(|x| -x).collect();
            Some((bound - measure.mass_at(&minus)).abs() <= AT_BOUND_TOL)
        })
        .collect();
    let violations = margins.iter().filter(|m| **m < -AT_BOUND_TOL).count();
    Ok(WeightAudit {
        strength,
        n,
        lower_cardinality: lower,
        bound,
        margins,
        antipodal_equality,
        violations,
        certified_non_member: violations > 0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    /// Uniform weights on exactly `N̲(t, n)` points.
    TightDesign,
    /// Uniform weights.
    Design,
    Generic,
}

/// Requires the measure to pass [`verify_strength`] at `tol`.
pub fn classify_tight(measure: &DiscreteMeasure, strength: u32, tol: f64) -> Result<Classification> {
    let report = verify_strength(measure, strength, tol);
    if !report.pass {
        return Err(Error::Precondition(format!(
            "measure does not have strength {strength} (max residual {:e})",
            report.max_residual()
        )));
    }
    let n = measure.dimension();
    let uniform = 1.0 / measure.len() as f64;
    if measure.weights().iter().any(|w| (w - uniform).abs() > tol) {
        return Ok(Classification::Generic);
    }
    if measure.len() as u64 != sphere_math::cardinality_lower(strength, n)? {
        return Ok(Classification::Design);
    }
    if strength == 3 && !is_orthonormal_frame(measure, tol) {
        return Ok(Classification::Design);
    }
    Ok(Classification::TightDesign)
}

/// Greedily pairs antipodes and checks the representatives are orthonormal.
fn is_orthonormal_frame(measure: &DiscreteMeasure, tol: f64) -> bool {
    let pts = measure.points();
    let pair_tol = tol.max(MERGE_TOL);
    let mut used = vec![false; pts.len()];
    let mut reps: Vec<&[f64]> = Vec::new();
    for i in 0..pts.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let partner = (0..pts.len()).find(|&j| !used[j] && (dot(&pts[i], &pts[j]) + 1.0).abs() <= pair_tol);
        match partner {
            Some(j) => used[j] = true,
            None => return false,
        }
        reps.push(&pts[i]);
    }
    reps.len() == measure.dimension()
        && reps.iter().enumerate().all(|(i, a)| {
            reps.iter()
                .take(i)
                .all(|b| dot(a, b).abs() <= tol)
        })
}
