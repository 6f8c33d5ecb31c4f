//! Limited-memory BFGS with Armijo backtracking.

use std::collections::VecDeque;

pub(crate) struct LbfgsOptions {
    pub max_iter: usize,
    pub memory: usize,
    pub grad_tol: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Minimizes `f` from `x` in place; returns the final value.
///
/// `f` writes the gradient into its second argument and returns the value.
pub(crate) fn minimize<F>(x: &mut [f64], mut f: F, opts: &LbfgsOptions) -> f64
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
{
    let dim = x.len();
    let mut g = vec![0.0; dim];
    let mut fx = f(x, &mut g);
    let mut history: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(opts.memory);
    let mut trial = vec![0.0; dim];
    let mut g_trial = vec![0.0; dim];
    let mut stalls = 0;

    for _ in 0..opts.max_iter {
        let gnorm = dot(&g, &g).sqrt();
        if gnorm <= opts.grad_tol * fx.abs().max(1.0) {
            break;
        }

        // Two-loop recursion.
        let mut d: Vec<f64> = g.iter().map(|v| -v).collect();
        let mut alphas = Vec::with_capacity(history.len());
        for (s, y, rho) in history.iter().rev() {
            let a = rho * dot(s, &d);
            for (di, yi) in d.iter_mut().zip(y) {
                *di -= a * yi;
            }
            alphas.push(a);
        }
        if let Some((s, y, _)) = history.back() {
            let gamma = dot(s, y) / dot(y, y);
            for di in d.iter_mut() {
                *di *= gamma;
            }
        } else {
            let scale = 1.0 / gnorm.max(1.0);
            for di in d.iter_mut() {
                *di *= scale;
            }
        }
        for ((s, y, rho), a) in history.iter().zip(alphas.into_iter().rev()) {
            let b = rho * dot(y, &d);
            for (di, si) in d.iter_mut().zip(s) {
                *di += (a - b) * si;
            }
        }
        let mut slope = dot(&g, &d);
        if !(slope < 0.0) {
            history.clear();
            d = g.iter().map(|v| -v / gnorm.max(1.0)).collect();
            slope = dot(&g, &d);
        }

        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            for i in 0..dim {
                trial[i] = x[i] + step * d[i];
            }
            let ft = f(&trial, &mut g_trial);
            if ft.is_finite() && ft <= fx + 1e-4 * step * slope {
                let s: Vec<f64> = (0..dim).map(|i| trial[i] - x[i]).collect();
                let y: Vec<f64> = (0..dim).map(|i| g_trial[i] - g[i]).collect();
                let sy = dot(&s, &y);
                if sy > 1e-14 * dot(&y, &y).sqrt() * dot(&s, &s).sqrt() {
                    if history.len() == opts.memory {
                        history.pop_front();
                    }
                    history.push_back((s, y, 1.0 / sy));
                }
                let decrease = fx - ft;
                x.copy_from_slice(&trial);
                g.copy_from_slice(&g_trial);
                fx = ft;
                accepted = true;
                if decrease <= 1e-15 * fx.abs().max(1.0) {
                    stalls += 1;
                } else {
                    stalls = 0;
                }
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            if history.is_empty() {
                break;
            }
            history.clear();
            continue;
        }
        if stalls >= 5 {
            break;
        }
    }
    fx
}
