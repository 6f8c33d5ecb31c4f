#ifndef SPHERICAL_CUBATURE_H
#define SPHERICAL_CUBATURE_H

/* Generated with cbindgen:0.29.4 */

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result code of every fallible call.
typedef enum ScStatus {
  SC_STATUS_OK = 0,
  SC_STATUS_INVALID_ARGUMENT = 1,
  SC_STATUS_NULL_POINTER = 2,
  // Infeasibility or a failed reduction.
  SC_STATUS_NUMERICAL = 3,
  // Input lacks a property the operation requires (e.g. strength).
  SC_STATUS_PRECONDITION = 4,
  SC_STATUS_PARSE = 5,
  SC_STATUS_PANIC = 6,
} ScStatus;

// Outcome of `sc_classify_tight`.
typedef enum ScClassification {
  SC_CLASSIFICATION_TIGHT_DESIGN = 0,
  SC_CLASSIFICATION_DESIGN = 1,
  SC_CLASSIFICATION_GENERIC = 2,
} ScClassification;

// Opaque handle to a discrete probability measure on the sphere.
typedef struct ScMeasure ScMeasure;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread; empty if none.
// Valid until the next failing call on the same thread.
const char *sc_last_error(void);

// Builds a measure from `count` points (row-major, `count * n` doubles) and
// positive weights; points are normalized and weights rescaled to sum 1.
//
// # Safety
// `points` must hold `count * n` doubles, `weights` `count` doubles, and
// `out` must be writable.
enum ScStatus sc_measure_new(size_t n,
                             size_t count,
                             const double *points,
                             const double *weights,
                             struct ScMeasure **out);

// Parses the JSON measure format `{"n":..,"points":[[..]],"weights":[..]}`.
//
// # Safety
// `json` must be a NUL-terminated string and `out` writable.
enum ScStatus sc_measure_from_json(const char *json, struct ScMeasure **out);

// Serializes a measure to JSON; release the result with `sc_string_free`.
//
// # Safety
// `m` must be a live handle and `out` writable.
enum ScStatus sc_measure_to_json(const struct ScMeasure *m, char **out);

// # Safety
// `s` must come from this library, or be null.
void sc_string_free(char *s);

// # Safety
// `m` must come from this library, or be null.
void sc_measure_free(struct ScMeasure *m);

// Number of support points; 0 for a null handle.
//
// # Safety
// `m` must be a live handle or null.
size_t sc_measure_len(const struct ScMeasure *m);

// Ambient dimension `n`; 0 for a null handle.
//
// # Safety
// `m` must be a live handle or null.
size_t sc_measure_dimension(const struct ScMeasure *m);

// Copies the unit support points, row-major, into `out` (`len * n` doubles).
//
// # Safety
// `out` must hold `out_len` doubles.
enum ScStatus sc_measure_points(const struct ScMeasure *m, double *out, size_t out_len);

// Copies the weights into `out`.
//
// # Safety
// `out` must hold `out_len` doubles.
enum ScStatus sc_measure_weights(const struct ScMeasure *m, double *out, size_t out_len);

// `{e_1, -e_1}` with equal weights.
//
// # Safety
// `out` must be writable.
enum ScStatus sc_antipodal_pair(size_t n, struct ScMeasure **out);

// Regular simplex with `n + 1` vertices.
//
// # Safety
// `out` must be writable.
enum ScStatus sc_simplex(size_t n, struct ScMeasure **out);

// `{±e_i}` with equal weights.
//
// # Safety
// `out` must be writable.
enum ScStatus sc_cross_polytope(size_t n, struct ScMeasure **out);

// Regular `count`-gon on the unit circle.
//
// # Safety
// `out` must be writable.
enum ScStatus sc_circle_points(size_t count, double phase, struct ScMeasure **out);

// Product rule of strength `t`.
//
// # Safety
// `out` must be writable.
enum ScStatus sc_product_cubature(size_t n, uint32_t t, struct ScMeasure **out);

// `Σ ν_i^θ` for `θ ∈ [0, 1)`; the support size at `θ = 0`.
//
// # Safety
// `m` must be a live handle and `out` writable.
enum ScStatus sc_theta_norm(const struct ScMeasure *m, double theta, double *out);

// Strength check: `pass` and the largest moment residual up to degree `t`.
//
// # Safety
// `m` must be a live handle; output pointers writable.
enum ScStatus sc_verify_strength(const struct ScMeasure *m,
                                 uint32_t t,
                                 double tol,
                                 bool *pass,
                                 double *max_residual);

// Largest `s ≤ t_max` with every degree up to `s` within `tol`.
//
// # Safety
// `m` must be a live handle and `out` writable.
enum ScStatus sc_max_strength(const struct ScMeasure *m, uint32_t t_max, double tol, uint32_t *out);

// Weight audit against the reproducing-kernel bound for strength `t`.
//
// # Safety
// `m` must be a live handle; output pointers writable.
enum ScStatus sc_audit_weights(const struct ScMeasure *m,
                               uint32_t t,
                               double *bound,
                               double *min_margin,
                               size_t *violations);

// Tightness classification of a strength-`t` measure.
//
// # Safety
// `m` must be a live handle and `out` writable.
enum ScStatus sc_classify_tight(const struct ScMeasure *m,
                                uint32_t t,
                                double tol,
                                enum ScClassification *out);

// Bounds on `Θ(t, θ, n)`; `exact` is NaN where no closed form is known.
//
// # Safety
// Output pointers must be writable.
enum ScStatus sc_theta_bounds(uint32_t t,
                              double theta,
                              size_t n,
                              double *lower,
                              double *upper,
                              double *exact);

// Tests `F(s) = Σ coeffs[k] s^k` as an LP certificate at strength `t`.
// `cardinality_bound` is `F(1)/a_0` when valid, NaN otherwise.
//
// # Safety
// `coeffs` must hold `len` doubles; output pointers writable.
enum ScStatus sc_lp_bound(const double *coeffs,
                          size_t len,
                          uint32_t t,
                          size_t n,
                          bool *valid,
                          double *cardinality_bound);

// Carathéodory reduction preserving moments up to degree `t`.
//
// # Safety
// `m` must be a live handle and `out` writable.
enum ScStatus sc_reduce_support(const struct ScMeasure *m,
                                uint32_t t,
                                double tol,
                                struct ScMeasure **out);

// Multi-start minimization of `Σ ν_i^θ` over strength-`t` measures with the
// default schedule. Deterministic for a given seed.
//
// # Safety
// Output pointers must be writable.
enum ScStatus sc_minimize_theta(uint32_t t,
                                double theta,
                                size_t n,
                                size_t restarts,
                                uint64_t seed,
                                double *value,
                                struct ScMeasure **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPHERICAL_CUBATURE_H */
