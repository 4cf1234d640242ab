#ifndef SOLIDANGLE_H
#define SOLIDANGLE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Angle engine policy.
 */
typedef enum SaPolicy {
  SA_POLICY_EXACT = 0,
  SA_POLICY_AOMOTO = 1,
  SA_POLICY_MONTE_CARLO = 2,
} SaPolicy;

/**
 * Status codes. `SA_OK` is zero.
 */
typedef enum SaStatus {
  SA_OK = 0,
  SA_NULL_POINTER = 1,
  SA_INVALID_UTF8 = 2,
  SA_PARSE = 3,
  SA_VALIDATION = 4,
  SA_SHAPE = 5,
  SA_SIZE = 6,
  SA_PRECONDITION = 7,
  SA_ACCURACY = 8,
  SA_NUMERIC = 9,
  SA_IO = 10,
  SA_BUFFER_TOO_SMALL = 11,
  SA_PANIC = 12,
} SaStatus;

/**
 * Built-in valuation.
 */
typedef enum SaValuation {
  SA_VALUATION_SOLID = 0,
  SA_VALUATION_INDICATOR = 1,
} SaValuation;

/**
 * Opaque angle engine handle.
 */
typedef struct SaEngine SaEngine;

/**
 * Opaque polytope handle.
 */
typedef struct SaPolytope SaPolytope;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after success.
 * The pointer stays valid until the next call on this thread.
 */
const char *sa_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void sa_string_free(char *s);

/**
 * Parses `{"vertices": [["0", "1/2"], ...]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out_handle` writable.
 */
enum SaStatus sa_polytope_from_json(const char *json, struct SaPolytope **out_handle);

/**
 * Canonical JSON of the polytope's vertices.
 *
 * # Safety
 * `p` must be a live handle and `json` writable.
 */
enum SaStatus sa_polytope_to_json(const struct SaPolytope *p, char **json);

/**
 * # Safety
 * `p` must be a live handle and `dim` writable.
 */
enum SaStatus sa_polytope_dim(const struct SaPolytope *p, size_t *dim);

/**
 * # Safety
 * `p` must come from this library and not have been freed; null is ignored.
 */
void sa_polytope_free(struct SaPolytope *p);

/**
 * Creates an angle engine. `mc_samples` and `seed` only matter for the
 * Monte Carlo policy.
 *
 * # Safety
 * `out_handle` must be writable.
 */
enum SaStatus sa_engine_new(enum SaPolicy policy,
                            uint64_t mc_samples,
                            uint64_t seed,
                            struct SaEngine **out_handle);

/**
 * # Safety
 * `e` must come from this library and not have been freed; null is ignored.
 */
void sa_engine_free(struct SaEngine *e);

/**
 * Number of lattice points in `tP`.
 *
 * # Safety
 * `p` must be a live handle and `result` writable.
 */
enum SaStatus sa_ehrhart_count(const struct SaPolytope *p, int64_t t, uint64_t *result);

/**
 * `A_P(t)` with its absolute error bound.
 *
 * # Safety
 * Handles must be live and the out-pointers writable.
 */
enum SaStatus sa_solid_angle_sum(const struct SaPolytope *p,
                                 const struct SaEngine *engine,
                                 int64_t t,
                                 double *value,
                                 double *abs_error);

/**
 * Sum of the solid angles at the vertices.
 *
 * # Safety
 * Handles must be live and the out-pointers writable.
 */
enum SaStatus sa_vertex_sum(const struct SaPolytope *p,
                            const struct SaEngine *engine,
                            double *value,
                            double *abs_error);

/**
 * Coefficients `c_0..c_d` of the solid-angle polynomial of a lattice
 * polytope and their error bounds; both buffers need `d + 1` entries.
 *
 * # Safety
 * Handles must be live and the buffers hold `len` doubles.
 */
enum SaStatus sa_solid_polynomial(const struct SaPolytope *p,
                                  const struct SaEngine *engine,
                                  double *coefficients,
                                  double *abs_errors,
                                  size_t len);

/**
 * h*-vector of a lattice polytope; `out_values` needs `d + 1` entries.
 *
 * # Safety
 * `p` must be a live handle and the buffer hold `len` integers.
 */
enum SaStatus sa_hstar(const struct SaPolytope *p, int64_t *out_values, size_t len);

/**
 * Numerator `a_0..a_d` of `Σ_t N_P(t) z^t` for a built-in valuation, and
 * whether it passed its nonnegativity checks.
 *
 * # Safety
 * Handles must be live, the buffers hold `len` doubles and `ok` writable.
 */
enum SaStatus sa_numerator(const struct SaPolytope *p,
                           const struct SaEngine *engine,
                           enum SaValuation valuation,
                           double *values,
                           double *abs_errors,
                           size_t len,
                           bool *ok);

/**
 * Runs the command line with `argv[0..argc]` (without the program name)
 * and returns its exit code and standard output.
 *
 * # Safety
 * `argv` must hold `argc` NUL-terminated strings; out-pointers writable.
 */
enum SaStatus sa_cli_run(size_t argc,
                         const char *const *argv,
                         int32_t *exit_code,
                         char **stdout_text);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SOLIDANGLE_H */
