//! C ABI over `spherical-cubature`.
//!
//! Measures cross the boundary as opaque `ScMeasure` handles owned by the
//! caller and released with `sc_measure_free`. Every fallible call returns an
//! `ScStatus`; on failure `sc_last_error` describes what went wrong on the
//! calling thread. Strings returned by the library are released with
//! `sc_string_free`. Panics never unwind into C: they surface as
//! `SC_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use spherical_cubature::bounds;
use spherical_cubature::designs;
use spherical_cubature::measures::{self, DiscreteMeasure};
use spherical_cubature::optimize::{self, OptimizerConfig};
use spherical_cubature::verify::{self, Classification};
use spherical_cubature::{Error, Polynomial};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScStatus {
    Ok = 0,
    InvalidArgument = 1,
    NullPointer = 2,
    /// Infeasibility or a failed reduction.
    Numerical = 3,
    /// Input lacks a property the operation requires (e.g. strength).
    Precondition = 4,
    Parse = 5,
    Panic = 6,
}

/// Outcome of `sc_classify_tight`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScClassification {
    TightDesign = 0,
    Design = 1,
    Generic = 2,
}

/// Opaque handle to a discrete probability measure on the sphere.
pub struct ScMeasure {
    inner: DiscreteMeasure,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> ScStatus {
    match err {
        Error::Parse(_) => ScStatus::Parse,
        Error::Precondition(_) => ScStatus::Precondition,
        e if e.is_numerical() => ScStatus::Numerical,
        _ => ScStatus::InvalidArgument,
    }
}

fn fail(status: ScStatus, msg: impl Into<String>) -> ScStatus {
    set_error(msg);
    status
}

/// Runs `body`, turning library errors and panics into status codes.
fn guard(body: impl FnOnce() -> Result<(), ScStatus>) -> ScStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => ScStatus::Ok,
        Ok(Err(status)) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(ScStatus::Panic, format!("panic: {msg}"))
        }
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, ScStatus>;
}

impl<T> OrStatus<T> for spherical_cubature::Result<T> {
    fn or_status(self) -> Result<T, ScStatus> {
        self.map_err(|e| fail(status_of(&e), e.to_string()))
    }
}

unsafe fn measure_ref<'a>(m: *const ScMeasure) -> Result<&'a DiscreteMeasure, ScStatus> {
    m.as_ref().map(|h| &h.inner).ok_or_else(|| fail(ScStatus::NullPointer, "null measure handle"))
}

unsafe fn out_ref<'a, T>(p: *mut T) -> Result<&'a mut T, ScStatus> {
    p.as_mut().ok_or_else(|| fail(ScStatus::NullPointer, "null output pointer"))
}

unsafe fn give(out: *mut *mut ScMeasure, m: DiscreteMeasure) -> Result<(), ScStatus> {
    *out_ref(out)? = Box::into_raw(Box::new(ScMeasure { inner: m }));
    Ok(())
}

unsafe fn slice<'a, T>(p: *const T, len: usize) -> Result<&'a [T], ScStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(ScStatus::NullPointer, "null array"));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

/// Message for the most recent failure on this thread; empty if none.
/// Valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a measure from `count` points (row-major, `count * n` doubles) and
/// positive weights; points are normalized and weights rescaled to sum 1.
///
/// # Safety
/// `points` must hold `count * n` doubles, `weights` `count` doubles, and
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_measure_new(
    n: usize,
    count: usize,
    points: *const f64,
    weights: *const f64,
    out: *mut *mut ScMeasure,
) -> ScStatus {
    guard(|| {
        let flat = slice(points, count.checked_mul(n).ok_or_else(|| fail(ScStatus::InvalidArgument, "size overflow"))?)?;
        let w = slice(weights, count)?;
        let pts = flat.chunks(n.max(1)).map(|c| c.to_vec()).collect();
        let m = DiscreteMeasure::from_unnormalized(n, pts, w.to_vec()).or_status()?;
        give(out, m)
    })
}

/// Parses the JSON measure format `{"n":..,"points":[[..]],"weights":[..]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sc_measure_from_json(json: *const c_char, out: *mut *mut ScMeasure) -> ScStatus {
    guard(|| {
        if json.is_null() {
            return Err(fail(ScStatus::NullPointer, "null string"));
        }
        let text = CStr::from_ptr(json).to_str().map_err(|e| fail(ScStatus::Parse, e.to_string()))?;
        let m = DiscreteMeasure::from_json_str(text).or_status()?;
        give(out, m)
    })
}

/// Serializes a measure to JSON; release the result with `sc_string_free`.
///
/// # Safety
/// `m` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sc_measure_to_json(m: *const ScMeasure, out: *mut *mut c_char) -> ScStatus {
    guard(|| {
        let m = measure_ref(m)?;
        let text = serde_json::to_string(m).map_err(|e| fail(ScStatus::Parse, e.to_string()))?;
        *out_ref(out)? = CString::new(text).map_err(|e| fail(ScStatus::Parse, e.to_string()))?.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library, or be null.
#[no_mangle]
pub unsafe extern "C" fn sc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `m` must come from this library, or be null.
#[no_mangle]
pub unsafe extern "C" fn sc_measure_free(m: *mut ScMeasure) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Number of support points; 0 for a null handle.
///
/// # Safety
/// `m` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn sc_measure_len(m: *const ScMeasure) -> usize {
    m.as_ref().map_or(0, |h| h.inner.len())
}

/// Ambient dimension `n`; 0 for a null handle.
///
/// # Safety
/// `m` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn sc_measure_dimension(m: *const ScMeasure) -> usize {
    m.as_ref().map_or(0, |h| h.inner.dimension())
}

/// Copies the unit support points, row-major, into `out` (`len * n` doubles).
///
/// # Safety
/// `out` must hold `out_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sc_measure_points(m: *const ScMeasure, out: *mut f64, out_len: usize) -> ScStatus {
    guard(|| {
        let m = measure_ref(m)?;
        let need = m.len() * m.dimension();
        if out_len < need {
            return Err(fail(ScStatus::InvalidArgument, format!("buffer holds {out_len} doubles, need {need}")));
        }
        let dst = std::slice::from_raw_parts_mut(out_ref(out)? as *mut f64, need);
        for (chunk, p) in dst.chunks_mut(m.dimension()).zip(m.points()) {
            chunk.copy_from_slice(p);
        }
        Ok(())
    })
}

/// Copies the weights into `out`.
///
/// # Safety
/// `out` must hold `out_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sc_measure_weights(m: *const ScMeasure, out: *mut f64, out_len: usize) -> ScStatus {
    guard(|| {
        let m = measure_ref(m)?;
        if out_len < m.len() {
            return Err(fail(ScStatus::InvalidArgument, format!("buffer holds {out_len} doubles, need {}", m.len())));
        }
        std::slice::from_raw_parts_mut(out_ref(out)? as *mut f64, m.len()).copy_from_slice(m.weights());
        Ok(())
    })
}

/// `{e_1, -e_1}` with equal weights.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_antipodal_pair(n: usize, out: *mut *mut ScMeasure) -> ScStatus {
    guard(|| give(out, designs::antipodal_pair(n, None).or_status()?))
}

/// Regular simplex with `n + 1` vertices.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_simplex(n: usize, out: *mut *mut ScMeasure) -> ScStatus {
    guard(|| give(out, designs::simplex(n).or_status()?))
}

/// `{±e_i}` with equal weights.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_cross_polytope(n: usize, out: *mut *mut ScMeasure) -> ScStatus {
    guard(|| give(out, designs::cross_polytope(n, None).or_status()?))
}

/// Regular `count`-gon on the unit circle.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_circle_points(count: usize, phase: f64, out: *mut *mut ScMeasure) -> ScStatus {
    guard(|| give(out, designs::circle_points(count, phase).or_status()?))
}

/// Product rule of strength `t`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_product_cubature(n: usize, t: u32, out: *mut *mut ScMeasure) -> ScStatus {
    guard(|| give(out, designs::product_cubature(n, t).or_status()?))
}

/// `Σ ν_i^θ` for `θ ∈ [0, 1)`; the support size at `θ = 0`.
///
/// # Safety
/// `m` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sc_theta_norm(m: *const ScMeasure, theta: f64, out: *mut f64) -> ScStatus {
    guard(|| {
        *out_ref(out)? = measures::theta_norm(measure_ref(m)?, theta).or_status()?;
        Ok(())
    })
}

/// Strength check: `pass` and the largest moment residual up to degree `t`.
///
/// # Safety
/// `m` must be a live handle; output pointers writable.
#[no_mangle]
pub unsafe extern "C" fn sc_verify_strength(
    m: *const ScMeasure,
    t: u32,
    tol: f64,
    pass: *mut bool,
    max_residual: *mut f64,
) -> ScStatus {
    guard(|| {
        let report = verify::verify_strength(measure_ref(m)?, t, tol);
        *out_ref(pass)? = report.pass;
        *out_ref(max_residual)? = report.max_residual();
        Ok(())
    })
}

/// Largest `s ≤ t_max` with every degree up to `s` within `tol`.
///
/// # Safety
/// `m` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sc_max_strength(m: *const ScMeasure, t_max: u32, tol: f64, out: *mut u32) -> ScStatus {
    guard(|| {
        *out_ref(out)? = verify::max_strength(measure_ref(m)?, t_max, tol);
        Ok(())
    })
}

/// Weight audit against the reproducing-kernel bound for strength `t`.
///
/// # Safety
/// `m` must be a live handle; output pointers writable.
#[no_mangle]
pub unsafe extern "C" fn sc_audit_weights(
    m: *const ScMeasure,
    t: u32,
    bound: *mut f64,
    min_margin: *mut f64,
    violations: *mut usize,
) -> ScStatus {
    guard(|| {
        let audit = verify::audit_weights(measure_ref(m)?, t).or_status()?;
        *out_ref(bound)? = audit.bound;
        *out_ref(min_margin)? = audit.min_margin();
        *out_ref(violations)? = audit.violations;
        Ok(())
    })
}

/// Tightness classification of a strength-`t` measure.
///
/// # Safety
/// `m` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sc_classify_tight(
    m: *const ScMeasure,
    t: u32,
    tol: f64,
    out: *mut ScClassification,
) -> ScStatus {
    guard(|| {
        *out_ref(out)? = match verify::classify_tight(measure_ref(m)?, t, tol).or_status()? {
            Classification::TightDesign => ScClassification::TightDesign,
            Classification::Design => ScClassification::Design,
            Classification::Generic => ScClassification::Generic,
        };
        Ok(())
    })
}

/// Bounds on `Θ(t, θ, n)`; `exact` is NaN where no closed form is known.
///
/// # Safety
/// Output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_theta_bounds(
    t: u32,
    theta: f64,
    n: usize,
    lower: *mut f64,
    upper: *mut f64,
    exact: *mut f64,
) -> ScStatus {
    guard(|| {
        let b = bounds::theta_bounds(t, theta, n).or_status()?;
        *out_ref(lower)? = b.lower;
        *out_ref(upper)? = b.upper;
        *out_ref(exact)? = b.exact.unwrap_or(f64::NAN);
        Ok(())
    })
}

/// Tests `F(s) = Σ coeffs[k] s^k` as an LP certificate at strength `t`.
/// `cardinality_bound` is `F(1)/a_0` when valid, NaN otherwise.
///
/// # Safety
/// `coeffs` must hold `len` doubles; output pointers writable.
#[no_mangle]
pub unsafe extern "C" fn sc_lp_bound(
    coeffs: *const f64,
    len: usize,
    t: u32,
    n: usize,
    valid: *mut bool,
    cardinality_bound: *mut f64,
) -> ScStatus {
    guard(|| {
        let f = Polynomial::new(slice(coeffs, len)?.to_vec());
        let cert = bounds::lp_bound(&f, t, n).or_status()?;
        *out_ref(valid)? = cert.is_valid();
        *out_ref(cardinality_bound)? = cert.cardinality_bound.unwrap_or(f64::NAN);
        Ok(())
    })
}

/// Carathéodory reduction preserving moments up to degree `t`.
///
/// # Safety
/// `m` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sc_reduce_support(m: *const ScMeasure, t: u32, tol: f64, out: *mut *mut ScMeasure) -> ScStatus {
    guard(|| give(out, measures::reduce_support(measure_ref(m)?, t, tol).or_status()?))
}

/// Multi-start minimization of `Σ ν_i^θ` over strength-`t` measures with the
/// default schedule. Deterministic for a given seed.
///
/// # Safety
/// Output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_minimize_theta(
    t: u32,
    theta: f64,
    n: usize,
    restarts: usize,
    seed: u64,
    value: *mut f64,
    out: *mut *mut ScMeasure,
) -> ScStatus {
    guard(|| {
        let mut cfg = OptimizerConfig::new(t, theta, n).or_status()?;
        cfg.restarts = restarts;
        cfg.seed = seed;
        let result = optimize::minimize_theta(&cfg).or_status()?;
        *out_ref(value)? = result.value;
        give(out, result.measure)
    })
}
