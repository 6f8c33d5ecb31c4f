//! Closed-form values for tight designs, Θ and LP certificates.

use approx::assert_abs_diff_eq;
use num_rational::BigRational;
use num_traits::FromPrimitive;
use spherical_cubature::bounds::{lp_bound, theta_bounds, theta_exact, theta_lower, theta_upper};
use spherical_cubature::designs;
use spherical_cubature::kernels::{kernel_eval, KernelSpec, Space};
use spherical_cubature::measures::{theta_norm, to_isometric_embedding};
use spherical_cubature::sphere_math::{cardinality_lower, cardinality_upper, moment_constant};
use spherical_cubature::verify::{audit_weights, classify_tight, verify_strength, Classification};
use spherical_cubature::Polynomial;

fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

#[test]
fn cardinality_table() {
    assert_eq!(cardinality_lower(3, 3).unwrap(), 6);
    assert_eq!(cardinality_lower(4, 3).unwrap(), 9);
    assert_eq!(cardinality_lower(1, 7).unwrap(), 2);
    assert_eq!(cardinality_upper(2, 3).unwrap(), 5);
    assert_eq!(cardinality_upper(3, 3).unwrap(), 10);
    assert_eq!(cardinality_upper(4, 3).unwrap(), 14);
}

#[test]
fn moment_constants() {
    assert_eq!(moment_constant(1, 3).unwrap(), ratio(1, 3));
    assert_eq!(moment_constant(2, 3).unwrap(), ratio(1, 5));
    assert_eq!(moment_constant(2, 2).unwrap(), ratio(3, 8));
    assert_eq!(moment_constant(0, 9).unwrap(), BigRational::from_i64(1).unwrap());
}

#[test]
fn antipodal_pair_is_optimal_for_strength_one() {
    for n in 2..=6 {
        let m = designs::antipodal_pair(n, None).unwrap();
        assert!(verify_strength(&m, 1, 1e-12).pass);
        assert!(!verify_strength(&m, 2, 1e-9).pass);
        for theta in [0.0, 0.25, 0.5, 0.75] {
            let v = theta_norm(&m, theta).unwrap();
            assert_abs_diff_eq!(v, 2f64.powf(1.0 - theta), epsilon = 1e-12);
            assert_abs_diff_eq!(theta_lower(1, theta, n).unwrap(), v, epsilon = 1e-12);
        }
    }
}

#[test]
fn simplex_is_tight_two_design() {
    for n in 2..=7 {
        let m = designs::simplex(n).unwrap();
        assert_eq!(m.len(), n + 1);
        assert!(verify_strength(&m, 2, 1e-12).pass);
        assert!(!verify_strength(&m, 3, 1e-9).pass);
        let audit = audit_weights(&m, 2).unwrap();
        assert!(audit.margins.iter().all(|g| g.abs() < 1e-12));
        assert_eq!(classify_tight(&m, 2, 1e-9).unwrap(), Classification::TightDesign);
        assert_abs_diff_eq!(theta_norm(&m, 0.5).unwrap(), ((n + 1) as f64).sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(theta_exact(2, 0.5, n).unwrap().unwrap(), ((n + 1) as f64).sqrt(), epsilon = 1e-12);
    }
    let tetra = designs::simplex(3).unwrap();
    for (i, p) in tetra.points().iter().enumerate() {
        for q in &tetra.points()[i + 1..] {
            let s: f64 = p.iter().zip(q).map(|(a, b)| a * b).sum();
            assert_abs_diff_eq!(s, -1.0 / 3.0, epsilon = 1e-12);
        }
    }
}

#[test]
fn cross_polytope_attains_strength_three_optimum() {
    for n in 2..=7 {
        let m = designs::cross_polytope(n, None).unwrap();
        assert!(verify_strength(&m, 3, 1e-12).pass);
        assert_eq!(classify_tight(&m, 3, 1e-9).unwrap(), Classification::TightDesign);
        let audit = audit_weights(&m, 3).unwrap();
        assert!(audit.margins.iter().all(|g| g.abs() < 1e-12));
        assert!(audit.antipodal_equality.iter().all(|e| *e == Some(true)));
        for theta in [0.0, 0.25, 0.5, 0.75] {
            let expected = (2.0 * n as f64).powf(1.0 - theta);
            assert_abs_diff_eq!(theta_norm(&m, theta).unwrap(), expected, epsilon = 1e-12);
            assert_abs_diff_eq!(theta_lower(3, theta, n).unwrap(), expected, epsilon = 1e-12);
        }
    }
    let report = verify_strength(&designs::cross_polytope(3, None).unwrap(), 4, 1e-9);
    assert_abs_diff_eq!(report.residual(4), 2.0 / 15.0, epsilon = 1e-14);
}

#[test]
fn circle_polygons_have_strength_count_minus_one() {
    for count in 2..=10 {
        let m = designs::circle_points(count, 0.0).unwrap();
        assert!(verify_strength(&m, count as u32 - 1, 1e-12).pass);
        assert!(!verify_strength(&m, count as u32, 1e-9).pass);
        let t = count as u32 - 1;
        assert_abs_diff_eq!(theta_norm(&m, 0.5).unwrap(), (count as f64).sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(theta_exact(t, 0.5, 2).unwrap().unwrap(), (count as f64).sqrt(), epsilon = 1e-12);
    }
    // Degree-4 failure of the square: Σ cos⁴ / 4 = 1/2 against 3/8.
    let square = designs::circle_points(4, 0.0).unwrap();
    assert_abs_diff_eq!(verify_strength(&square, 4, 1e-9).residual(4), 1.0 / 8.0, epsilon = 1e-14);
}

#[test]
fn theta_bounds_examples() {
    let b = theta_bounds(3, 0.5, 3).unwrap();
    assert_abs_diff_eq!(b.lower, 6f64.sqrt(), epsilon = 1e-12);
    assert_abs_diff_eq!(b.exact.unwrap(), 6f64.sqrt(), epsilon = 1e-12);
    assert_abs_diff_eq!(b.upper, 6f64.sqrt(), epsilon = 1e-12);

    assert_abs_diff_eq!(theta_lower(4, 0.5, 3).unwrap(), 3.0, epsilon = 1e-12);
    assert_eq!(theta_lower(5, 0.0, 4).unwrap(), cardinality_lower(5, 4).unwrap() as f64);
    assert_abs_diff_eq!(theta_exact(2, 0.5, 4).unwrap().unwrap(), 5f64.sqrt(), epsilon = 1e-12);
    assert_eq!(theta_exact(3, 0.0, 3).unwrap(), Some(6.0));
    assert_eq!(theta_exact(5, 0.5, 3).unwrap(), None);

    let (v, w) = theta_upper(3, 0.5, 5).unwrap();
    assert_abs_diff_eq!(v, 10f64.sqrt(), epsilon = 1e-12);
    assert_eq!(w.unwrap().len(), 10);
    let (v, w) = theta_upper(4, 0.5, 2).unwrap();
    assert_abs_diff_eq!(v, 5f64.sqrt(), epsilon = 1e-12);
    assert_eq!(w.unwrap().len(), 5);
    let (v, _) = theta_upper(4, 0.0, 3).unwrap();
    assert!(v <= 14.0);
}

#[test]
fn kernel_of_full_space_peaks_at_dimension() {
    let spec = KernelSpec::new(3, Space::FullPoly(1)).unwrap();
    assert_eq!(spec.polynomial().coeffs(), &[1.0, 3.0]);
    assert_abs_diff_eq!(kernel_eval(&spec, 1.0).unwrap(), 4.0, epsilon = 1e-12);
    let spec = KernelSpec::new(3, Space::HomogPoly(1)).unwrap();
    assert_abs_diff_eq!(kernel_eval(&spec, 1.0).unwrap(), 3.0, epsilon = 1e-12);
    for n in 2..=6 {
        for t in 1..=3 {
            let spec = KernelSpec::new(n, Space::FullPoly(t)).unwrap();
            assert_abs_diff_eq!(
                kernel_eval(&spec, 1.0).unwrap(),
                cardinality_lower(2 * t, n).unwrap() as f64,
                epsilon = 1e-9
            );
        }
    }
}

#[test]
fn lp_certificates() {
    let cert = lp_bound(&Polynomial::new(vec![1.0, 6.0, 9.0]), 2, 3).unwrap();
    assert!(cert.is_valid());
    assert_abs_diff_eq!(cert.a0, 4.0, epsilon = 1e-12);
    assert_abs_diff_eq!(cert.cardinality_bound.unwrap(), 4.0, epsilon = 1e-9);
    assert_abs_diff_eq!(cert.sum_squares_bound.unwrap(), 0.25, epsilon = 1e-9);

    let cert = lp_bound(&Polynomial::new(vec![0.0, 0.0, 1.0]), 2, 3).unwrap();
    assert!(cert.is_valid());
    assert_abs_diff_eq!(cert.cardinality_bound.unwrap(), 3.0, epsilon = 1e-9);

    let cert = lp_bound(&Polynomial::new(vec![0.0, 0.0, 1.0]), 1, 3).unwrap();
    assert!(!cert.sign_condition);
    assert!(cert.cardinality_bound.is_none());
}

#[test]
fn embedding_from_cross_polytope() {
    let m = designs::cross_polytope(3, None).unwrap();
    let e = to_isometric_embedding(&m, 1).unwrap();
    assert_eq!(e.rows.len(), 6);
    for r in &e.rows {
        let norm: f64 = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert_abs_diff_eq!(norm, 1.0 / 2f64.sqrt(), epsilon = 1e-12);
    }
    assert!(e.relative_distortion(&[0.3, -1.2, 2.0]) < 1e-12);
    assert!(to_isometric_embedding(&m, 2).is_err());
}
