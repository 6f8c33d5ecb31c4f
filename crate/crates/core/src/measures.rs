//! Finitely supported probability measures on `S^{n-1}`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::sphere_math::{self, monomials_of_degree, MultiIndex};

/// Tolerance on `|ξ_i| = 1` and `Σ ν_i = 1`.
pub const UNIT_TOL: f64 = 1e-12;
/// Support points closer than this are treated as one atom.
pub const MERGE_TOL: f64 = 1e-9;
/// Atoms lighter than this after a pruning step are dropped.
pub const WEIGHT_FLOOR: f64 = 1e-13;

/// A probability measure `Σ ν_i δ_{ξ_i}` on the unit sphere of `R^n`.
///
/// Invariants: unit-norm points, strictly positive weights summing to one,
/// and no two points within [`MERGE_TOL`] of each other.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    n: usize,
    points: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

/// Canonical JSON layout: `{"n": .., "points": [[..], ..], "weights": [..]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureJson {
    pub n: usize,
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Merges atoms within `tol`, adding their weights. The first occurrence keeps its position.
pub(crate) fn merge_atoms(points: Vec<Vec<f64>>, weights: Vec<f64>, tol: f64) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut out_p: Vec<Vec<f64>> = Vec::with_capacity(points.len());
    let mut out_w: Vec<f64> = Vec::with_capacity(points.len());
    for (p, w) in points.into_iter().zip(weights) {
        match out_p.iter().position(|q| distance(q, &p) < tol) {
            Some(j) => out_w[j] += w,
            None => {
                out_p.push(p);
                out_w.push(w);
            }
        }
    }
    (out_p, out_w)
}

impl DiscreteMeasure {
    /// Builds a measure, normalizing the points and merging coincident atoms.
    ///
    /// Weights must be positive and sum to one within [`UNIT_TOL`].
    pub fn new(n: usize, points: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidMeasure(format!("weights sum to {total}, not 1")));
        }
        Self::from_unnormalized(n, points, weights)
    }

    /// Like [`DiscreteMeasure::new`] but rescales the weights to total mass one.
    pub fn from_unnormalized(n: usize, points: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(invalid(format!("ambient dimension must be at least 2, got {n}")));
        }
        if points.is_empty() {
            return Err(Error::InvalidMeasure("empty support".into()));
        }
        if points.len() != weights.len() {
            return Err(Error::InvalidMeasure(format!(
                "{} points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        let mut unit = Vec::with_capacity(points.len());
        for p in points {
            if p.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: p.len() });
            }
            let r = norm(&p);
            if !r.is_finite() || r == 0.0 {
                return Err(Error::InvalidMeasure("support point with zero or non-finite norm".into()));
            }
            // `+ 0.0` folds -0.0 into 0.0 so serialized output is canonical.
            unit.push(p.iter().map(|x| x / r + 0.0).collect::<Vec<_>>());
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidMeasure(format!("weight {w} is not strictly positive")));
        }
        let total: f64 = weights.iter().sum();
        let weights: Vec<f64> = weights.iter().map(|w| w / total).collect();
        let (points, weights) = merge_atoms(unit, weights, MERGE_TOL);
        Ok(DiscreteMeasure { n, points, weights })
    }

    /// Drops atoms below `floor` and renormalizes.
    pub(crate) fn pruned(n: usize, points: Vec<Vec<f64>>, weights: Vec<f64>, floor: f64) -> Result<Self> {
        let (p, w): (Vec<_>, Vec<_>) = points.into_iter().zip(weights).filter(|(_, w)| *w >= floor).unzip();
        Self::from_unnormalized(n, p, w)
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.points.iter().map(|p| p.as_slice()).zip(self.weights.iter().copied())
    }

    /// `Σ ν_i ξ_i^α`.
    pub fn integrate_monomial(&self, alpha: &MultiIndex) -> f64 {
        self.atoms().map(|(p, w)| w * alpha.eval(p)).sum()
    }

    pub fn integrate<F: Fn(&[f64]) -> f64>(&self, f: F) -> f64 {
        self.atoms().map(|(p, w)| w * f(p)).sum()
    }

    /// Weight at the support point within [`MERGE_TOL`] of `x`, or zero.
    pub fn mass_at(&self, x: &[f64]) -> f64 {
        self.atoms()
            .find(|(p, _)| distance(p, x) < MERGE_TOL)
            .map_or(0.0, |(_, w)| w)
    }

    /// Image under `x ↦ Q x`.
    pub fn transformed(&self, q: &DMatrix<f64>) -> Result<Self> {
        if q.nrows() != self.n || q.ncols() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: q.nrows() });
        }
        let points = self
            .points
            .iter()
            .map(|p| (q * DVector::from_column_slice(p)).iter().copied().collect())
            .collect();
        Self::from_unnormalized(self.n, points, self.weights.clone())
    }

    pub fn to_json(&self) -> MeasureJson {
        MeasureJson {
            n: self.n,
            points: self.points.clone(),
            weights: self.weights.clone(),
        }
    }

    pub fn from_json(json: MeasureJson) -> Result<Self> {
        Self::new(json.n, json.points, json.weights)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let json: MeasureJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(json)
    }
}

impl Serialize for DiscreteMeasure {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DiscreteMeasure {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let json = MeasureJson::deserialize(deserializer)?;
        DiscreteMeasure::from_json(json).map_err(serde::de::Error::custom)
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if !(0.0..1.0).contains(&theta) {
        return Err(invalid(format!("theta must lie in [0, 1), got {theta}")));
    }
    Ok(())
}

/// `Σ w_i^θ` over a raw weight vector (zero entries contribute nothing).
pub fn theta_sum(weights: &[f64], theta: f64) -> f64 {
    weights.iter().filter(|w| **w > 0.0).map(|w| w.powf(theta)).sum()
}

/// `‖ν‖_θ = Σ ν_i^θ`; the support size when `θ = 0`.
pub fn theta_norm(measure: &DiscreteMeasure, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    if theta == 0.0 {
        return Ok(measure.len() as f64);
    }
    Ok(theta_sum(measure.weights(), theta))
}

/// `(ν + ν∘(-id)) / 2` with coincident atoms merged.
pub fn symmetrize(measure: &DiscreteMeasure) -> DiscreteMeasure {
    let mut points = measure.points.clone();
    let mut weights: Vec<f64> = measure.weights.iter().map(|w| w / 2.0).collect();
    for (p, w) in measure.atoms() {
        points.push(p.iter().map(|x| -x).collect());
        weights.push(w / 2.0);
    }
    let (points, weights) = merge_atoms(points, weights, MERGE_TOL);
    DiscreteMeasure { n: measure.n, points, weights }
}

/// Monomials of homogeneous degrees `m` and `m - 1`: on the sphere they span
/// every polynomial of degree at most `m`.
pub(crate) fn reduction_basis(n: usize, m: u32) -> Vec<MultiIndex> {
    let mut basis = monomials_of_degree(n, m);
    if m >= 1 {
        basis.extend(monomials_of_degree(n, m - 1));
    }
    basis
}

fn constraint_matrix(basis: &[MultiIndex], points: &[Vec<f64>]) -> DMatrix<f64> {
    let rows = basis.len() + 1;
    let cols = points.len();
    // Pad to at least square so the SVD exposes the full null space.
    let mut a = DMatrix::zeros(rows.max(cols), cols);
    for (j, p) in points.iter().enumerate() {
        a[(0, j)] = 1.0;
        for (i, alpha) in basis.iter().enumerate() {
            a[(i + 1, j)] = alpha.eval(p);
        }
    }
    a
}

/// Unit null vector of `a`, if its smallest singular value is negligible.
/// Ties between equal singular values go to the lowest index.
fn null_direction(a: &DMatrix<f64>) -> Option<DVector<f64>> {
    let svd = a.clone().svd(false, true);
    let v_t = svd.v_t?;
    let sv = &svd.singular_values;
    let smax = sv.max();
    let mut best = 0;
    for i in 1..sv.len() {
        if sv[i] < sv[best] {
            best = i;
        }
    }
    if sv[best] > 1e-10 * smax.max(1.0) {
        return None;
    }
    Some(v_t.row(best).transpose())
}

fn moment_residual(basis: &[MultiIndex], target: &[f64], points: &[Vec<f64>], weights: &[f64]) -> f64 {
    basis
        .iter()
        .zip(target)
        .map(|(alpha, m)| {
            let v: f64 = points.iter().zip(weights).map(|(p, w)| w * alpha.eval(p)).sum();
            (v - m).abs()
        })
        .fold(0.0, f64::max)
}

/// How [`reduce_support_with`] picks between the two ends of the feasible segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepRule {
    /// Shortest translation; ties resolved toward `+v`.
    Shortest,
    /// Endpoint with the smaller `Σ ν_i^θ` (the objective is concave along the segment).
    MinTheta(f64),
}

/// Carathéodory pruning preserving every moment of degree at most `m`.
///
/// Stops once the support has at most [`sphere_math::cardinality_upper`]
/// points or the constraint matrix has trivial null space.
pub fn reduce_support(measure: &DiscreteMeasure, m: u32, tol: f64) -> Result<DiscreteMeasure> {
    let cap = sphere_math::cardinality_upper(m, measure.n)? as usize;
    reduce_support_with(measure, m, tol, cap, StepRule::Shortest)
}

/// [`reduce_support`] with an explicit cardinality cap and step rule.
pub fn reduce_support_with(
    measure: &DiscreteMeasure,
    m: u32,
    tol: f64,
    cap: usize,
    rule: StepRule,
) -> Result<DiscreteMeasure> {
    if m < 1 {
        return Err(invalid("strength must be at least 1"));
    }
    let n = measure.n;
    let basis = reduction_basis(n, m);
    let target: Vec<f64> = basis.iter().map(|a| measure.integrate_monomial(a)).collect();

    let mut points = measure.points.clone();
    let mut weights = measure.weights.clone();
    while points.len() > cap {
        let a = constraint_matrix(&basis, &points);
        let Some(v) = null_direction(&a) else { break };

        // Largest steps keeping weights non-negative along +v and -v.
        let reach = |sign: f64| {
            weights
                .iter()
                .zip(v.iter())
                .filter(|(_, vi)| sign * **vi < 0.0)
                .map(|(w, vi)| w / vi.abs())
                .fold(f64::INFINITY, f64::min)
        };
        let (tp, tm) = (reach(1.0), reach(-1.0));
        let step = |sign: f64, tau: f64| -> Vec<f64> {
            weights.iter().zip(v.iter()).map(|(w, vi)| (w + sign * tau * vi).max(0.0)).collect()
        };
        let candidate = match rule {
            StepRule::Shortest => {
                if tp <= tm {
                    step(1.0, tp)
                } else {
                    step(-1.0, tm)
                }
            }
            StepRule::MinTheta(theta) => {
                let (wp, wm) = (step(1.0, tp), step(-1.0, tm));
                if theta_sum(&wp, theta) <= theta_sum(&wm, theta) {
                    wp
                } else {
                    wm
                }
            }
        };
        // The blocking weight lands on zero up to rounding; drop it with any other dust.
        let (p, w): (Vec<_>, Vec<_>) = points
            .iter()
            .cloned()
            .zip(candidate)
            .filter(|(_, w)| *w > WEIGHT_FLOOR)
            .unzip();
        if p.len() == points.len() {
            break;
        }
        let total: f64 = w.iter().sum();
        points = p;
        weights = w.into_iter().map(|x| x / total).collect();

        let residual = moment_residual(&basis, &target, &points, &weights);
        if residual > tol {
            return Err(Error::Reduction { residual, tol });
        }
    }
    Ok(DiscreteMeasure { n, points, weights })
}

/// Rows `r_i` of an isometric embedding `ℓ²_n → ℓ^{2t}_N`: `Σ <r_i, u>^{2t} = |u|^{2t}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingMatrix {
    pub n: usize,
    /// Target exponent `2t`.
    pub exponent: u32,
    pub rows: Vec<Vec<f64>>,
}

impl EmbeddingMatrix {
    /// `Σ_i <r_i, u>^{2t}`.
    pub fn power_sum(&self, u: &[f64]) -> f64 {
        self.rows.iter().map(|r| dot(r, u).powi(self.exponent as i32)).sum()
    }

    /// `|Σ <r_i,u>^{2t} / |u|^{2t} - 1|`.
    pub fn relative_distortion(&self, u: &[f64]) -> f64 {
        let target = dot(u, u).powi(self.exponent as i32 / 2);
        (self.power_sum(u) / target - 1.0).abs()
    }
}

/// Rows `(ν_i / c_{2t,n})^{1/(2t)} ξ_i` of the embedding induced by a strength-`2t` measure.
pub fn to_isometric_embedding(measure: &DiscreteMeasure, t: u32) -> Result<EmbeddingMatrix> {
    if t < 1 {
        return Err(invalid("half-strength t must be at least 1"));
    }
    let report = crate::verify::verify_strength(measure, 2 * t, crate::verify::DEFAULT_TOL);
    if !report.pass {
        return Err(Error::Precondition(format!(
            "measure does not have strength {} (max residual {:e})",
            2 * t,
            report.max_residual()
        )));
    }
    let c = sphere_math::rational_to_f64(&sphere_math::moment_constant(t, measure.n)?);
    let rows = measure
        .atoms()
        .map(|(p, w)| {
            let s = (w / c).powf(1.0 / (2 * t) as f64);
            p.iter().map(|x| s * x).collect()
        })
        .collect();
    Ok(EmbeddingMatrix { n: measure.n, exponent: 2 * t, rows })
}
