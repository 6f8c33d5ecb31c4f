//! Exact dimension counts and sphere moments.
//!
//! Everything here is computed in arbitrary-precision integers or rationals;
//! these values serve as oracles for the floating-point code elsewhere in the
//! crate. Conversion to `f64` happens at the call site.
//!
//! Dimension convention: the sphere is `S^{n-1}` embedded in `R^n`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn to_u64(value: BigUint, what: &'static str) -> Result<u64> {
    value.to_u64().ok_or(Error::Overflow(what))
}

fn check_dimension(n: usize) -> Result<u64> {
    if n < 2 {
        return Err(invalid(format!("ambient dimension must be at least 2, got {n}")));
    }
    Ok(n as u64)
}

/// `C(n+t-1, n-1)`: dimension of homogeneous degree-`t` polynomials restricted to the sphere.
pub fn dim_homogeneous(n: usize, t: u32) -> Result<u64> {
    let n = check_dimension(n)?;
    to_u64(binomial(n + t as u64 - 1, n - 1), "dim_homogeneous")
}

/// Dimension of polynomials of degree at most `t` on `S^{n-1}`.
pub fn dim_full(n: usize, t: u32) -> Result<u64> {
    let hi = dim_homogeneous(n, t)?;
    let lo = if t == 0 { 0 } else { dim_homogeneous(n, t - 1)? };
    hi.checked_add(lo).ok_or(Error::Overflow("dim_full"))
}

/// Dimension of the degree-`k` spherical harmonics on `S^{n-1}`.
pub fn dim_harmonic(n: usize, k: u32) -> Result<u64> {
    let nn = check_dimension(n)?;
    match k {
        0 => Ok(1),
        1 => Ok(nn),
        _ => {
            let a = binomial(nn + k as u64 - 1, nn - 1);
            let b = binomial(nn + k as u64 - 3, nn - 1);
            to_u64(a - b, "dim_harmonic")
        }
    }
}

/// Dimension table for one `(n, t)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceDims {
    pub n: usize,
    pub t: u32,
    pub dim_full: u64,
    pub dim_homog: u64,
}

impl SpaceDims {
    pub fn new(n: usize, t: u32) -> Result<Self> {
        Ok(SpaceDims {
            n,
            t,
            dim_full: dim_full(n, t)?,
            dim_homog: dim_homogeneous(n, t)?,
        })
    }

    pub fn dim_harmonic(&self, k: u32) -> Result<u64> {
        dim_harmonic(self.n, k)
    }
}

fn check_strength(m: u32, n: usize) -> Result<()> {
    if m < 1 {
        return Err(invalid("strength must be at least 1"));
    }
    check_dimension(n)?;
    Ok(())
}

/// Lower bound on the number of points of a strength-`m` cubature formula.
///
/// `dim P_t` for `m = 2t`, and `2 dim P_t^(h)` for `m = 2t + 1`.
pub fn cardinality_lower(m: u32, n: usize) -> Result<u64> {
    check_strength(m, n)?;
    let t = m / 2;
    if m % 2 == 0 {
        dim_full(n, t)
    } else {
        dim_homogeneous(n, t)?
            .checked_mul(2)
            .ok_or(Error::Overflow("cardinality_lower"))
    }
}

/// Carathéodory-type upper bound on the minimal number of points.
///
/// `C(n+2t-1, n-1) - 1` for `m = 2t`, twice that for `m = 2t + 1`. Note that
/// for `m = 1` and for even `m` on the circle this falls below
/// [`cardinality_lower`]; callers that need a usable support budget should
/// take the maximum of the two.
pub fn cardinality_upper(m: u32, n: usize) -> Result<u64> {
    check_strength(m, n)?;
    let t = m / 2;
    let even = dim_homogeneous(n, 2 * t)? - 1;
    if m % 2 == 0 {
        Ok(even)
    } else {
        even.checked_mul(2).ok_or(Error::Overflow("cardinality_upper"))
    }
}

/// `(2k-1)!! = 1 * 3 * ... * (2k-1)`, with the empty product equal to 1.
fn odd_double_factorial(k: u32) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, j| acc * (2 * j as u64 - 1))
}

/// `c_{2t,n} = (2t-1)!! / (n (n+2) ... (n+2t-2))`, the value of
/// `∫ <x,u>^{2t} dσ` for any unit `u`.
pub fn moment_constant(t: u32, n: usize) -> Result<BigRational> {
    let nn = check_dimension(n)?;
    let num = odd_double_factorial(t);
    let den = (0..t as u64).fold(BigUint::one(), |acc, j| acc * (nn + 2 * j));
    Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

/// Exponent vector of a monomial `x^α` on `R^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    /// `2t · e_axis` in dimension `n`.
    pub fn axis_power(n: usize, axis: usize, power: u32) -> Self {
        let mut e = vec![0; n];
        e[axis] = power;
        MultiIndex(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Evaluates `x^α`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(x)
            .map(|(&a, &xi)| xi.powi(a as i32))
            .product()
    }
}

/// All exponent vectors of total degree exactly `d` in `n` variables, in
/// lexicographically decreasing order (`x_1^d` first).
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<MultiIndex> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(MultiIndex(prefix.clone()));
            prefix.pop();
            return;
        }
        for a in (0..=d).rev() {
            prefix.push(a);
            rec(n, d - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    rec(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}

/// All exponent vectors of total degree at most `d`, grouped by degree.
pub fn monomials_up_to(n: usize, d: u32) -> Vec<MultiIndex> {
    (0..=d).flat_map(|k| monomials_of_degree(n, k)).collect()
}

/// `∫_{S^{n-1}} x^α dσ` for the rotation-invariant probability measure σ.
///
/// Zero if any exponent is odd; otherwise
/// `∏ (α_i - 1)!! / ∏_{j=1}^{|α|/2} (n + 2j - 2)`.
pub fn monomial_moment(n: usize, alpha: &MultiIndex) -> Result<BigRational> {
    let nn = check_dimension(n)?;
    if alpha.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: alpha.len(),
        });
    }
    if alpha.0.iter().any(|a| a % 2 == 1) {
        return Ok(BigRational::zero());
    }
    let num = alpha
        .0
        .iter()
        .fold(BigUint::one(), |acc, &a| acc * odd_double_factorial(a / 2));
    let half = alpha.degree() as u64 / 2;
    let den = (0..half).fold(BigUint::one(), |acc, j| acc * (nn + 2 * j));
    Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

/// Floating-point value of a rational, exact to the last ulp for the sizes used here.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact sphere moments for a list of monomials, converted to `f64`.
pub fn moment_vector(n: usize, monomials: &[MultiIndex]) -> Result<Vec<f64>> {
    monomials
        .iter()
        .map(|a| monomial_moment(n, a).map(|r| rational_to_f64(&r)))
        .collect()
}
