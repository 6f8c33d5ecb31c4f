//! Library values checked against independently computed oracles.

mod common;

use approx::assert_abs_diff_eq;
use common::{choose, classical_zonal, exponents, sphere_moment, GramKernel, Lcg};
use spherical_cubature::designs;
use spherical_cubature::kernels::{kernel_eval, pairwise_energy, zonal_kernel, zonal_project, KernelSpec, Space};
use spherical_cubature::measures::DiscreteMeasure;
use spherical_cubature::sphere_math::{self, monomial_moment, rational_to_f64, MultiIndex};
use spherical_cubature::verify::verify_strength;
use spherical_cubature::Polynomial;

#[test]
fn oracle_sanity() {
    assert_abs_diff_eq!(common::normal_moment(4), 3.0, epsilon = 1e-12);
    assert_abs_diff_eq!(common::normal_moment(8), 105.0, epsilon = 1e-9);
    assert_abs_diff_eq!(common::radial_moment(3, 1), 3.0, epsilon = 1e-12);
    assert_abs_diff_eq!(sphere_moment(3, &[2, 2, 0]), 1.0 / 15.0, epsilon = 1e-14);
}

#[test]
fn monomial_moments_match_gaussian_quadrature() {
    for n in 2..=5 {
        for d in 0..=8 {
            for alpha in exponents(n, d) {
                let exact = rational_to_f64(&monomial_moment(n, &MultiIndex::new(alpha.clone())).unwrap());
                let oracle = sphere_moment(n, &alpha);
                assert!((exact - oracle).abs() < 1e-12, "n={n} alpha={alpha:?}: {exact} vs {oracle}");
            }
        }
    }
}

#[test]
fn dimensions_match_monomial_counts() {
    for n in 2..=8usize {
        for t in 0..=8u32 {
            let homog = exponents(n, t).len() as u64;
            assert_eq!(sphere_math::dim_homogeneous(n, t).unwrap(), homog);
            let below = if t >= 2 { exponents(n, t - 2).len() as u64 } else { 0 };
            assert_eq!(sphere_math::dim_harmonic(n, t).unwrap(), homog - below);
            // On the sphere, degrees t and t-1 together span everything of degree ≤ t.
            let prev = if t >= 1 { exponents(n, t - 1).len() as u64 } else { 0 };
            assert_eq!(sphere_math::dim_full(n, t).unwrap(), homog + prev);
        }
    }
}

#[test]
fn cardinality_bounds_from_binomials() {
    for n in 2..=7usize {
        for t in 1..=5u32 {
            let n64 = n as u64;
            let t64 = t as u64;
            let full = choose(n64 + t64 - 1, n64 - 1) + choose(n64 + t64 - 2, n64 - 1);
            assert_eq!(sphere_math::cardinality_lower(2 * t, n).unwrap(), full);
            assert_eq!(
                sphere_math::cardinality_lower(2 * t + 1, n).unwrap(),
                2 * choose(n64 + t64 - 1, n64 - 1)
            );
            let even = choose(n64 + 2 * t64 - 1, n64 - 1) - 1;
            assert_eq!(sphere_math::cardinality_upper(2 * t, n).unwrap(), even);
            assert_eq!(sphere_math::cardinality_upper(2 * t + 1, n).unwrap(), 2 * even);
        }
    }
}

#[test]
fn zonal_kernels_match_classical_families() {
    for n in 2..=4 {
        for k in 0..=10 {
            for i in 0..=40 {
                let s = -1.0 + i as f64 / 20.0;
                let ours = zonal_kernel(n, k, s).unwrap();
                let oracle = classical_zonal(n, k, s);
                assert!((ours - oracle).abs() < 1e-9 * oracle.abs().max(1.0), "n={n} k={k} s={s}");
            }
        }
    }
}

#[test]
fn kernels_match_gram_construction() {
    let mut rng = Lcg(17);
    for n in 2..=4 {
        for t in 0..=3u32 {
            let full = GramKernel::full(n, t);
            let homog = GramKernel::homogeneous(n, t);
            let lower = if t > 0 { Some(GramKernel::full(n, t - 1)) } else { None };
            let full_spec = KernelSpec::new(n, Space::FullPoly(t)).unwrap();
            let homog_spec = KernelSpec::new(n, Space::HomogPoly(t)).unwrap();
            let harm_spec = KernelSpec::new(n, Space::Harmonic(t)).unwrap();
            for _ in 0..10 {
                let x = rng.unit(n);
                let y = rng.unit(n);
                let s: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
                let f = full.eval(&x, &y);
                assert!((kernel_eval(&full_spec, s).unwrap() - f).abs() < 1e-9, "full n={n} t={t}");
                let h = homog.eval(&x, &y);
                assert!((kernel_eval(&homog_spec, s).unwrap() - h).abs() < 1e-9, "homog n={n} t={t}");
                let harm = f - lower.as_ref().map_or(0.0, |l| l.eval(&x, &y));
                assert!((kernel_eval(&harm_spec, s).unwrap() - harm).abs() < 1e-9, "harmonic n={n} t={t}");
            }
        }
    }
}

#[test]
fn kernel_reproduces_polynomials() {
    // ∫ K(x, y) p(y) dσ(y) = p(x) for p in the space, checked with an exact
    // product rule of sufficient strength as the integrator.
    let n = 3;
    let rule = designs::product_cubature(n, 6).unwrap();
    assert!(verify_strength(&rule, 6, 1e-12).pass);
    let spec = KernelSpec::new(n, Space::FullPoly(3)).unwrap();
    let p = |y: &[f64]| 1.0 - 2.0 * y[0] + y[1] * y[2] + 0.5 * y[0].powi(3);
    let mut rng = Lcg(3);
    for _ in 0..5 {
        let x = rng.unit(n);
        let integral = rule.integrate(|y| {
            let s: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
            kernel_eval(&spec, s).unwrap() * p(y)
        });
        assert_abs_diff_eq!(integral, p(&x), epsilon = 1e-10);
    }
}

#[test]
fn zonal_projection_reconstructs_polynomial() {
    for n in 2..=6 {
        let f = Polynomial::new(vec![0.3, -1.0, 2.0, 0.5, -0.25]);
        let series = zonal_project(&f, n).unwrap();
        for i in 0..=20 {
            let s = -1.0 + i as f64 / 10.0;
            assert_abs_diff_eq!(series.eval(s), f.eval(s), epsilon = 1e-10);
        }
    }
}

#[test]
fn pairwise_energy_matches_direct_sum() {
    let mut rng = Lcg(99);
    for n in 2..=5 {
        let pts: Vec<Vec<f64>> = (0..7).map(|_| rng.unit(n)).collect();
        let w: Vec<f64> = (0..7).map(|_| 0.1 + rng.uniform()).collect();
        let m = DiscreteMeasure::from_unnormalized(n, pts, w).unwrap();
        for k in 0..=6 {
            let mut direct = 0.0;
            for (x, a) in m.atoms() {
                for (y, b) in m.atoms() {
                    let s: f64 = x.iter().zip(y).map(|(p, q)| p * q).sum();
                    direct += a * b * if n <= 4 { classical_zonal(n, k, s) } else { zonal_kernel(n, k, s).unwrap() };
                }
            }
            assert_abs_diff_eq!(pairwise_energy(&m, k), direct, epsilon = 1e-10);
        }
    }
}

#[test]
fn axis_moments_equal_moment_constant() {
    for n in 2..=6 {
        for t in 0..=5 {
            let c = rational_to_f64(&sphere_math::moment_constant(t, n).unwrap());
            let mut alpha = vec![0; n];
            alpha[0] = 2 * t;
            assert_abs_diff_eq!(c, sphere_moment(n, &alpha), epsilon = 1e-12);
        }
    }
}
