//! Cubature formulas on the unit sphere `S^{n-1} ⊂ R^n`.
//!
//! A cubature measure of strength `t` is a finitely supported probability
//! measure that integrates every polynomial of degree at most `t` exactly.
//! The crate constructs the known tight families, certifies strength and
//! per-weight bounds, evaluates reproducing kernels and linear-programming
//! test functions, bounds `Θ(t, θ, n) = min Σ ν_i^θ`, and searches for
//! minimizers numerically.
//!
//! The convention throughout is the sphere `S^{n-1}` in `R^n`, so the regular
//! simplex has `n + 1` vertices and the cross-polytope `2n`.

pub mod bounds;
pub mod cli;
pub mod designs;
pub mod error;
pub mod kernels;
pub mod measures;
pub mod optimize;
pub mod poly;
pub mod quadrature;
pub mod sphere_math;
pub mod verify;

pub use error::{Error, Result};
pub use kernels::{KernelSpec, Space, ZonalSeries};
pub use measures::{DiscreteMeasure, EmbeddingMatrix};
pub use poly::Polynomial;
pub use sphere_math::MultiIndex;
