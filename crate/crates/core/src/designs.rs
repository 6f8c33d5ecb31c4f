//! Constructors for the known infinite families of tight spherical designs,
//! plus convex mixtures and a product-rule cubature for arbitrary strength.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Error, Result};
use crate::measures::{merge_atoms, DiscreteMeasure, MERGE_TOL};
use crate::quadrature::gauss_gegenbauer;

fn check_dimension(n: usize) -> Result<()> {
    if n < 2 {
        return Err(invalid(format!("ambient dimension must be at least 2, got {n}")));
    }
    Ok(())
}

/// `(δ_u + δ_{-u}) / 2`; `u` defaults to `e_1`. Tight 1-design.
pub fn antipodal_pair(n: usize, u: Option<&[f64]>) -> Result<DiscreteMeasure> {
    check_dimension(n)?;
    let u = match u {
        Some(u) => u.to_vec(),
        None => {
            let mut e = vec![0.0; n];
            e[0] = 1.0;
            e
        }
    };
    if u.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: u.len() });
    }
    if u.iter().all(|x| *x == 0.0) {
        return Err(invalid("direction must be non-zero"));
    }
    let minus = u.iter().map(|x| -x).collect();
    DiscreteMeasure::new(n, vec![u, minus], vec![0.5, 0.5])
}

/// Uniform measure on the `n + 1` vertices of a regular simplex inscribed in `S^{n-1}`.
/// Tight 2-design; vertex inner products are `-1/n`.
///
/// Vertex `i` is the image of `e_i ∈ R^{n+1}` under the Helmert basis of the
/// hyperplane orthogonal to `(1, ..., 1)`.
pub fn simplex(n: usize) -> Result<DiscreteMeasure> {
    check_dimension(n)?;
    let points = (0..=n)
        .map(|i| {
            (1..=n)
                .map(|j| {
                    let scale = ((j * (j + 1)) as f64).sqrt();
                    if i < j {
                        1.0 / scale
                    } else if i == j {
                        -(j as f64) / scale
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    DiscreteMeasure::from_unnormalized(n, points, vec![1.0; n + 1])
}

/// Uniform measure on `{±u_i}` for an orthonormal basis (columns of `basis`,
/// default the standard basis). Tight 3-design.
pub fn cross_polytope(n: usize, basis: Option<&DMatrix<f64>>) -> Result<DiscreteMeasure> {
    check_dimension(n)?;
    let basis = match basis {
        Some(b) => {
            if b.nrows() != n || b.ncols() != n {
                return Err(Error::DimensionMismatch { expected: n, found: b.nrows() });
            }
            let gram = b.transpose() * b;
            if (gram - DMatrix::<f64>::identity(n, n)).amax() > 1e-10 {
                return Err(invalid("basis is not orthonormal"));
            }
            b.clone()
        }
        None => DMatrix::identity(n, n),
    };
    let mut points = Vec::with_capacity(2 * n);
    for col in basis.column_iter() {
        points.push(col.iter().copied().collect::<Vec<_>>());
        points.push(col.iter().map(|x| -x).collect());
    }
    DiscreteMeasure::from_unnormalized(n, points, vec![1.0; 2 * n])
}

/// `count` equally spaced points on the circle, starting at angle `phase`.
/// Strength exactly `count - 1`.
pub fn circle_points(count: usize, phase: f64) -> Result<DiscreteMeasure> {
    if count < 2 {
        return Err(invalid(format!("need at least 2 circle points, got {count}")));
    }
    let points = (0..count)
        .map(|j| {
            let a = phase + 2.0 * PI * j as f64 / count as f64;
            vec![a.cos(), a.sin()]
        })
        .collect();
    DiscreteMeasure::from_unnormalized(2, points, vec![1.0; count])
}

/// Convex combination `Σ c_j ν_j` with coincident atoms merged.
pub fn mix(parts: &[(DiscreteMeasure, f64)]) -> Result<DiscreteMeasure> {
    let Some((first, _)) = parts.first() else {
        return Err(invalid("mixture needs at least one component"));
    };
    let n = first.dimension();
    let total: f64 = parts.iter().map(|(_, c)| c).sum();
    if parts.iter().any(|(_, c)| !(*c > 0.0)) || (total - 1.0).abs() > 1e-12 {
        return Err(invalid("mixture coefficients must be positive and sum to 1"));
    }
    let mut points = Vec::new();
    let mut weights = Vec::new();
    for (m, c) in parts {
        if m.dimension() != n {
            return Err(Error::DimensionMismatch { expected: n, found: m.dimension() });
        }
        for (p, w) in m.atoms() {
            points.push(p.to_vec());
            weights.push(c * w);
        }
    }
    let (points, weights) = merge_atoms(points, weights, MERGE_TOL);
    DiscreteMeasure::new(n, points, weights)
}

/// Product-rule cubature of strength `t` on `S^{n-1}`.
///
/// Writes `x = (√(1-s²) y, s)` with `y ∈ S^{n-2}` and combines a Gauss rule
/// in `s` for the projected measure with a recursive rule for `y`, bottoming
/// out at `t + 1` equally spaced circle points. Weights are not uniform.
pub fn product_cubature(n: usize, t: u32) -> Result<DiscreteMeasure> {
    check_dimension(n)?;
    if t < 1 {
        return Err(invalid("strength must be at least 1"));
    }
    let (points, weights) = product_rule(n, t);
    DiscreteMeasure::from_unnormalized(n, points, weights)
}

fn product_rule(n: usize, t: u32) -> (Vec<Vec<f64>>, Vec<f64>) {
    if n == 2 {
        let count = t as usize + 1;
        let pts = (0..count)
            .map(|j| {
                let a = 2.0 * PI * j as f64 / count as f64;
                vec![a.cos(), a.sin()]
            })
            .collect();
        return (pts, vec![1.0 / count as f64; count]);
    }
    let (sub_pts, sub_w) = product_rule(n - 1, t);
    let gauss = gauss_gegenbauer(n, t as usize / 2 + 1);
    let mut points = Vec::new();
    let mut weights = Vec::new();
    for (&s, &ws) in gauss.nodes.iter().zip(&gauss.weights) {
        let r = (1.0 - s * s).max(0.0).sqrt();
        for (y, &wy) in sub_pts.iter().zip(&sub_w) {
            let mut x: Vec<f64> = y.iter().map(|v| r * v).collect();
            x.push(s);
            points.push(x);
            weights.push(ws * wy);
        }
    }
    (points, weights)
}

/// Haar-random orthogonal matrix: QR of a Gaussian matrix with the sign of
/// `R`'s diagonal absorbed into `Q`.
pub fn random_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}

/// Uniformly distributed point on `S^{n-1}`.
pub fn random_unit<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if r > 1e-12 {
            return v.into_iter().map(|x| x / r).collect();
        }
    }
}
