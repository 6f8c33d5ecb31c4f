//! Numerical minimization of `Σ ν_i^θ` over strength-`t` cubature measures.
//!
//! Each restart runs a penalty continuation: `N` ambient vectors (normalized
//! onto the sphere) and softmax-parameterized weights minimize
//! `Σ ν_i^θ + ρ |r|²`, where `r` is the residual of every monomial moment of
//! degree at most `t`, with `ρ` growing geometrically between stages and
//! light atoms pruned in between. The stage output is then snapped
//! (near-coincident atoms merged), pruned by Carathéodory reduction, polished
//! to machine-precision feasibility by Gauss–Newton on points and weights,
//! stripped of dust atoms where that keeps it feasible, and finally passed
//! through [`restore_feasibility`].

mod lbfgs;
mod moments;
mod nnls;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::designs::random_unit;
use crate::error::{invalid, Error, Result};
use crate::measures::{merge_atoms, reduce_support_with, theta_norm, theta_sum, DiscreteMeasure, StepRule};
use crate::sphere_math;
use crate::verify::{self, verify_strength};

use lbfgs::LbfgsOptions;
use moments::{max_abs, MomentSystem};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub t: u32,
    pub theta: f64,
    pub n: usize,
    /// Support size at initialization; defaults to `max(N̄(t,n), N̲(t,n))`.
    pub budget: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Max moment residual accepted as feasible.
    pub tol: f64,
    /// L-BFGS iterations per penalty stage.
    pub max_iter: usize,
    pub penalty_start: f64,
    pub penalty_growth: f64,
    pub stages: usize,
    /// Weights below this are pruned between stages.
    pub prune_floor: f64,
    /// Atoms closer than this are merged before polishing.
    pub snap_tol: f64,
    /// Worker threads for restarts; results do not depend on it.
    pub threads: usize,
}

impl OptimizerConfig {
    pub fn new(t: u32, theta: f64, n: usize) -> Result<Self> {
        let upper = sphere_math::cardinality_upper(t, n)?;
        let lower = sphere_math::cardinality_lower(t, n)?;
        Ok(OptimizerConfig {
            t,
            theta,
            n,
            budget: upper.max(lower) as usize,
            restarts: 20,
            seed: 0,
            tol: 1e-9,
            max_iter: 2000,
            penalty_start: 1e4,
            penalty_growth: 10.0,
            stages: 6,
            prune_floor: 1e-8,
            snap_tol: 1e-3,
            threads: 1,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.theta) {
            return Err(invalid(format!("theta must lie in [0, 1), got {}", self.theta)));
        }
        let lower = sphere_math::cardinality_lower(self.t, self.n)?;
        if (self.budget as u64) < lower {
            return Err(invalid(format!(
                "support budget {} is below the minimal cardinality {lower}",
                self.budget
            )));
        }
        if self.restarts == 0 {
            return Err(invalid("need at least one restart"));
        }
        if self.stages == 0 || !(self.penalty_start > 0.0) || !(self.penalty_growth >= 1.0) {
            return Err(invalid("penalty schedule must be positive and non-decreasing"));
        }
        if !(self.tol > 0.0) {
            return Err(invalid("tolerance must be positive"));
        }
        Ok(())
    }
}

/// One line of optimizer diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartDiagnostic {
    pub index: usize,
    /// `Σ ν_i^θ` of the restart's final measure (infinite if it produced none).
    pub value: f64,
    /// Max moment residual of the final measure.
    pub residual: f64,
    pub support: usize,
    pub feasible: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimizeOutcome {
    pub measure: DiscreteMeasure,
    pub value: f64,
    pub residual: f64,
    pub best_restart: usize,
    pub restarts: Vec<RestartDiagnostic>,
}

/// Best-of-restarts minimization. Deterministic for a fixed config.
pub fn minimize_theta(config: &OptimizerConfig) -> Result<OptimizeOutcome> {
    config.validate()?;
    let penalty_sys = MomentSystem::new(config.n, config.t, 1)?;
    let run = |i: usize| run_restart(config, &penalty_sys, i);
    let results: Vec<(RestartDiagnostic, Option<DiscreteMeasure>)> = if config.threads <= 1 {
        (0..config.restarts).map(run).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| invalid(format!("thread pool: {e}")))?;
        pool.install(|| (0..config.restarts).into_par_iter().map(run).collect())
    };

    let mut best: Option<usize> = None;
    for (i, (diag, _)) in results.iter().enumerate() {
        if diag.feasible && best.is_none_or(|b| diag.value < results[b].0.value) {
            best = Some(i);
        }
    }
    let restarts: Vec<RestartDiagnostic> = results.iter().map(|(d, _)| d.clone()).collect();
    let Some(b) = best else {
        let residual = restarts.iter().map(|d| d.residual).fold(f64::INFINITY, f64::min);
        return Err(Error::Infeasible {
            reason: format!("no restart reached tolerance {:e}", config.tol),
            residual,
        });
    };
    let measure = results[b].1.clone().expect("feasible restart carries a measure");
    Ok(OptimizeOutcome {
        value: restarts[b].value,
        residual: restarts[b].residual,
        best_restart: b,
        measure,
        restarts,
    })
}

/// Objective exponent used in place of θ = 0.
const SURROGATE_THETA: f64 = 0.5;

fn softmax(z: &[f64]) -> Vec<f64> {
    let zmax = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = z.iter().map(|v| (v - zmax).exp()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v| v / s).collect()
}

/// Penalty objective over `x = [y_1 .. y_N, z_1 .. z_N]`.
fn penalty_objective(sys: &MomentSystem, theta: f64, rho: f64, count: usize, x: &[f64], grad: &mut [f64]) -> f64 {
    let n = sys.n;
    let (ys, z) = x.split_at(count * n);
    let w = softmax(z);
    let mut units = Vec::with_capacity(count);
    let mut radii = Vec::with_capacity(count);
    for i in 0..count {
        let y = &ys[i * n..(i + 1) * n];
        let r = y.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-300);
        radii.push(r);
        units.push(y.iter().map(|v| v / r).collect::<Vec<_>>());
    }
    let tables: Vec<Vec<f64>> = units.iter().map(|u| sys.table(u)).collect();
    let mut res: Vec<f64> = sys.target.iter().map(|m| -m).collect();
    for (i, table) in tables.iter().enumerate() {
        for (r, v) in res.iter_mut().zip(sys.row_values(table)) {
            *r += w[i] * v;
        }
    }
    let penalty: f64 = res.iter().map(|r| r * r).sum();
    let objective = theta_sum(&w, theta);

    // d/dν_i of the penalty, and the chain rule through normalization.
    let mut dw = vec![0.0; count];
    let mut dxi = vec![0.0; n];
    let (gy, gz) = grad.split_at_mut(count * n);
    for (i, table) in tables.iter().enumerate() {
        dw[i] = 2.0 * rho * sys.row_values(table).zip(&res).map(|(v, r)| v * r).sum::<f64>();
        sys.weighted_gradient(table, &res, &mut dxi);
        let scale = 2.0 * rho * w[i];
        let u = &units[i];
        let radial: f64 = dxi.iter().zip(u).map(|(a, b)| a * b).sum();
        for k in 0..n {
            gy[i * n + k] = scale * (dxi[k] - radial * u[k]) / radii[i];
        }
    }
    // Softmax chain: ∂/∂z_i = ν_i (g_i - Σ_j ν_j g_j); the θ-term is done in closed form.
    let mean: f64 = w.iter().zip(&dw).map(|(a, b)| a * b).sum();
    let obj_mean = theta * objective;
    for i in 0..count {
        let obj_part = theta * w[i].powf(theta) - w[i] * obj_mean;
        gz[i] = w[i] * (dw[i] - mean) + obj_part;
    }
    objective + rho * penalty
}

fn decode(n: usize, count: usize, x: &[f64]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let (ys, z) = x.split_at(count * n);
    let points = ys
        .chunks(n)
        .map(|y| {
            let r = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            y.iter().map(|v| v / r).collect()
        })
        .collect();
    (points, softmax(z))
}

fn encode(n: usize, points: &[Vec<f64>], weights: &[f64]) -> Vec<f64> {
    let mut x = Vec::with_capacity(points.len() * (n + 1));
    for p in points {
        x.extend_from_slice(p);
    }
    x.extend(weights.iter().map(|w| w.ln()));
    x
}

/// Gauss–Newton on points and weights toward zero residual of `sys`.
/// Returns the polished atoms and the final max residual.
fn polish(sys: &MomentSystem, points: &[Vec<f64>], weights: &[f64], max_iter: usize) -> (Vec<Vec<f64>>, Vec<f64>, f64) {
    let n = sys.n;
    let m = sys.len();
    let count = points.len();
    let mut pts = points.to_vec();
    let mut w = weights.to_vec();
    let mut res = sys.residual(&pts, &w);
    let mut norm = res.iter().map(|r| r * r).sum::<f64>();

    for _ in 0..max_iter {
        if max_abs(&res) < 1e-15 {
            break;
        }
        let cols = count * (n + 1);
        let mut jac = DMatrix::<f64>::zeros(m, cols);
        for (i, p) in pts.iter().enumerate() {
            let (vals, grads) = sys.values_and_gradients(p);
            for row in 0..m {
                let g = &grads[row * n..(row + 1) * n];
                let radial: f64 = g.iter().zip(p).map(|(a, b)| a * b).sum();
                for k in 0..n {
                    jac[(row, i * (n + 1) + k)] = w[i] * (g[k] - radial * p[k]);
                }
                jac[(row, i * (n + 1) + n)] = vals[row];
            }
        }
        let mut jjt = &jac * jac.transpose();
        let damping = 1e-12 * (jjt.trace() / m as f64).max(1e-300);
        for d in 0..m {
            jjt[(d, d)] += damping;
        }
        let Some(chol) = jjt.cholesky() else { break };
        let step = -(jac.transpose() * chol.solve(&DVector::from_column_slice(&res)));

        let mut alpha = 1.0;
        let mut improved = false;
        for _ in 0..30 {
            let mut trial_pts = pts.clone();
            let mut trial_w = w.clone();
            let mut ok = true;
            for i in 0..count {
                let base = i * (n + 1);
                let y: Vec<f64> = (0..n).map(|k| pts[i][k] + alpha * step[base + k]).collect();
                let r = y.iter().map(|v| v * v).sum::<f64>().sqrt();
                trial_pts[i] = y.iter().map(|v| v / r).collect();
                trial_w[i] = w[i] + alpha * step[base + n];
                if !(trial_w[i] > 0.0) {
                    ok = false;
                }
            }
            if ok {
                let trial_res = sys.residual(&trial_pts, &trial_w);
                let trial_norm = trial_res.iter().map(|r| r * r).sum::<f64>();
                if trial_norm < norm {
                    pts = trial_pts;
                    w = trial_w;
                    res = trial_res;
                    norm = trial_norm;
                    improved = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if !improved {
            break;
        }
    }
    let total: f64 = w.iter().sum();
    let w = w.into_iter().map(|v| v / total).collect::<Vec<_>>();
    let residual = max_abs(&sys.residual(&pts, &w));
    (pts, w, residual)
}

/// Merges atoms within `tol`, placing the merged atom at the normalized weighted mean.
fn snap(points: Vec<Vec<f64>>, weights: Vec<f64>, tol: f64) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut groups: Vec<(Vec<f64>, Vec<f64>, f64)> = Vec::new(); // (anchor, weighted sum, weight)
    for (p, w) in points.into_iter().zip(weights) {
        let hit = groups.iter_mut().find(|(a, _, _)| {
            a.iter().zip(&p).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt() < tol
        });
        match hit {
            Some((_, sum, mass)) => {
                for (s, x) in sum.iter_mut().zip(&p) {
                    *s += w * x;
                }
                *mass += w;
            }
            None => {
                let sum = p.iter().map(|x| w * x).collect();
                groups.push((p, sum, w));
            }
        }
    }
    groups
        .into_iter()
        .map(|(_, sum, mass)| {
            let r = sum.iter().map(|v| v * v).sum::<f64>().sqrt();
            (sum.iter().map(|v| v / r).collect(), mass)
        })
        .unzip()
}

fn run_restart(cfg: &OptimizerConfig, penalty_sys: &MomentSystem, index: usize) -> (RestartDiagnostic, Option<DiscreteMeasure>) {
    let fail = |residual: f64, support: usize| {
        (
            RestartDiagnostic { index, value: f64::INFINITY, residual, support, feasible: false },
            None,
        )
    };
    let n = cfg.n;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let mut points: Vec<Vec<f64>> = (0..cfg.budget).map(|_| random_unit(n, &mut rng)).collect();
    let mut weights = vec![1.0 / cfg.budget as f64; cfg.budget];

    // Counting measure has no useful gradient; a concave surrogate still favors sparse support.
    let smooth_theta = if cfg.theta == 0.0 { SURROGATE_THETA } else { cfg.theta };
    let opts = LbfgsOptions { max_iter: cfg.max_iter, memory: 12, grad_tol: 1e-12 };
    let Ok(sys) = MomentSystem::independent(n, cfg.t) else {
        return fail(f64::INFINITY, cfg.budget);
    };
    let mut rho = cfg.penalty_start;
    let mut polished = (Vec::new(), Vec::new());
    for _ in 0..cfg.stages {
        let count = points.len();
        let mut x = encode(n, &points, &weights);
        lbfgs::minimize(&mut x, |x, g| penalty_objective(penalty_sys, smooth_theta, rho, count, x, g), &opts);
        let (p, w) = decode(n, count, &x);
        let (p, w): (Vec<_>, Vec<_>) = p.into_iter().zip(w).filter(|(_, w)| *w >= cfg.prune_floor).unzip();
        let total: f64 = w.iter().sum();
        points = p;
        weights = w.into_iter().map(|v| v / total).collect();
        // Gauss-Newton converges fast once the penalty iterate is near the feasible set.
        let (p, w) = snap(points.clone(), weights.clone(), cfg.snap_tol);
        let (p, w, residual) = polish(&sys, &p, &w, 50);
        polished = (p, w);
        if residual <= 0.1 * cfg.tol {
            break;
        }
        rho *= cfg.penalty_growth;
    }

    let (p, w) = polished;
    let Ok(mut measure) = DiscreteMeasure::pruned(n, p, w, cfg.prune_floor) else {
        return fail(f64::INFINITY, 0);
    };
    if let Ok(reduced) = reduce_support_with(&measure, cfg.t, 1e-8, 0, StepRule::MinTheta(smooth_theta)) {
        measure = reduced;
    }
    let (p, w, residual) = polish(&sys, measure.points(), measure.weights(), 50);
    if let Ok(m) = DiscreteMeasure::pruned(n, p, w, cfg.prune_floor) {
        measure = m;
    }
    measure = strip_dust(&sys, measure, cfg);

    match restore_feasibility(&measure, cfg.t, cfg.tol) {
        Ok(m) => {
            let residual = verify_strength(&m, cfg.t, cfg.tol).max_residual();
            let value = theta_norm(&m, cfg.theta).unwrap_or(f64::INFINITY);
            (
                RestartDiagnostic { index, value, residual, support: m.len(), feasible: true },
                Some(m),
            )
        }
        Err(_) => fail(residual, measure.len()),
    }
}

/// Repeatedly drops the lightest atom and re-polishes while the result stays
/// feasible and `Σ ν_i^θ` does not increase.
fn strip_dust(sys: &MomentSystem, mut measure: DiscreteMeasure, cfg: &OptimizerConfig) -> DiscreteMeasure {
    let Ok(lower) = sphere_math::cardinality_lower(cfg.t, cfg.n) else {
        return measure;
    };
    let bound = 1.0 / lower as f64;
    let score = |m: &DiscreteMeasure| if cfg.theta == 0.0 { m.len() as f64 } else { theta_sum(m.weights(), cfg.theta) };
    while measure.len() as u64 > lower {
        let (light, &w_min) = measure
            .weights()
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty");
        if w_min > 0.1 * bound {
            break;
        }
        let mut p = measure.points().to_vec();
        let mut w = measure.weights().to_vec();
        p.remove(light);
        w.remove(light);
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|v| *v /= total);
        let (p, w, residual) = polish(sys, &p, &w, 50);
        if residual > 0.1 * cfg.tol {
            break;
        }
        match DiscreteMeasure::pruned(cfg.n, p, w, cfg.prune_floor) {
            Ok(m) if score(&m) <= score(&measure) + 1e-12 => measure = m,
            _ => break,
        }
    }
    measure
}

/// Re-solves the weights on a fixed support by non-negative least squares
/// against the exact moments of degree at most `t`.
pub fn restore_feasibility(measure: &DiscreteMeasure, t: u32, tol: f64) -> Result<DiscreteMeasure> {
    if t < 1 {
        return Err(invalid("strength must be at least 1"));
    }
    if verify_strength(measure, t, tol).pass {
        return Ok(measure.clone());
    }
    let n = measure.dimension();
    let sys = MomentSystem::new(n, t, 0)?;
    let a = DMatrix::from_fn(sys.len(), measure.len(), |row, col| {
        let p = &measure.points()[col];
        sys.exps[row].iter().zip(p).map(|(&e, &x)| x.powi(e as i32)).product()
    });
    let b = DVector::from_column_slice(&sys.target);
    let w = nnls::nnls(&a, &b);
    let kept: Vec<(Vec<f64>, f64)> = measure
        .points()
        .iter()
        .cloned()
        .zip(w.iter().copied())
        .filter(|(_, w)| *w > 1e-15)
        .collect();
    if kept.is_empty() {
        return Err(Error::Infeasible { reason: "no non-negative weights fit the moments".into(), residual: 1.0 });
    }
    let (p, w): (Vec<_>, Vec<_>) = kept.into_iter().unzip();
    let (p, w) = merge_atoms(p, w, crate::measures::MERGE_TOL);
    let restored = DiscreteMeasure::from_unnormalized(n, p, w)?;
    let report = verify_strength(&restored, t, tol);
    if !report.pass {
        return Err(Error::Infeasible {
            reason: format!("support of {} points cannot carry strength {t}", measure.len()),
            residual: report.max_residual(),
        });
    }
    Ok(restored)
}

/// Max moment residual of degree at most `t`, as used for feasibility.
pub fn feasibility_residual(measure: &DiscreteMeasure, t: u32) -> f64 {
    verify::verify_strength(measure, t, f64::INFINITY).max_residual()
}
