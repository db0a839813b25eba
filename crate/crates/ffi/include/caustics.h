#ifndef CAUSTICS_H
#define CAUSTICS_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CausticsStatus {
  CAUSTICS_STATUS_OK = 0,
  CAUSTICS_STATUS_NULL_POINTER = 1,
  CAUSTICS_STATUS_INVALID_ARGUMENT = 2,
  CAUSTICS_STATUS_ENUMERATION_LIMIT = 3,
  CAUSTICS_STATUS_EMPTY_CAP = 4,
  CAUSTICS_STATUS_NUMERICAL_FAILURE = 5,
  CAUSTICS_STATUS_PANIC = 6,
} CausticsStatus;

/**
 * A phase function built from a singularity label.
 */
typedef struct CausticsPhase CausticsPhase;

/**
 * Result of a sup-norm scan.
 */
typedef struct CausticsScan CausticsScan;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next call into the library on the same thread.
 */
const char *caustics_last_error(void);

/**
 * Library version as a static nul-terminated string.
 */
const char *caustics_version(void);

/**
 * Parses a label such as `"A2"`, `"D4-"` or `"E6"`.
 *
 * # Safety
 * `label` must be a nul-terminated string and `out` a valid pointer.
 */
enum CausticsStatus caustics_phase_new(const char *label, struct CausticsPhase **out);

/**
 * # Safety
 * `p` must come from [`caustics_phase_new`] and not be used afterwards.
 */
void caustics_phase_free(struct CausticsPhase *p);

/**
 * Number of phase variables `k` (1 or 2), or 0 for a null handle.
 *
 * # Safety
 * `p` must be null or a live handle.
 */
size_t caustics_phase_k(const struct CausticsPhase *p);

/**
 * Number of unfolding parameters, or 0 for a null handle.
 *
 * # Safety
 * `p` must be null or a live handle.
 */
size_t caustics_phase_k0(const struct CausticsPhase *p);

/**
 * Caustic order `κ` and threshold `δ₀` as reduced fractions.
 *
 * # Safety
 * `p` must be a live handle; the out pointers must be valid.
 */
enum CausticsStatus caustics_phase_orders(const struct CausticsPhase *p,
                                          int64_t *kappa_num,
                                          int64_t *kappa_den,
                                          int64_t *delta_num,
                                          int64_t *delta_den);

/**
 * `I_h(x)` with the fixed bump (`delta = 0`) or a narrow bump of regularity
 * `delta`. `x` has `k0` entries.
 *
 * # Safety
 * `p` must be a live handle, `x` must point to `x_len` doubles, and the out
 * pointers must be valid. `converged` may be null.
 */
enum CausticsStatus caustics_integral(const struct CausticsPhase *p,
                                      double delta,
                                      const double *x,
                                      size_t x_len,
                                      double h,
                                      double rel_tol,
                                      double *out_re,
                                      double *out_im,
                                      bool *converged);

/**
 * Sup-norm scan with default settings and the fit of its exponent.
 * `quick` uses fewer shells.
 *
 * # Safety
 * `p` must be a live handle and `out` a valid pointer.
 */
enum CausticsStatus caustics_scan_run(const struct CausticsPhase *p,
                                      double delta,
                                      bool quick,
                                      struct CausticsScan **out);

/**
 * # Safety
 * `s` must come from [`caustics_scan_run`] and not be used afterwards.
 */
void caustics_scan_free(struct CausticsScan *s);

/**
 * Fitted slope of `log sup|I|` against `log(1/h)`; NaN for a null handle.
 *
 * # Safety
 * `s` must be null or a live handle.
 */
double caustics_scan_slope(const struct CausticsScan *s);

/**
 * # Safety
 * `s` must be null or a live handle.
 */
double caustics_scan_r_squared(const struct CausticsScan *s);

/**
 * Number of per-h rows.
 *
 * # Safety
 * `s` must be null or a live handle.
 */
size_t caustics_scan_rows(const struct CausticsScan *s);

/**
 * Row `i`: `h` and the observed sup.
 *
 * # Safety
 * `s` must be a live handle; the out pointers must be valid.
 */
enum CausticsStatus caustics_scan_row(const struct CausticsScan *s,
                                      size_t i,
                                      double *h,
                                      double *sup_abs);

/**
 * Lattice points strictly inside `|α − center| < radius`.
 *
 * # Safety
 * `center` must point to `n` doubles and `out` must be valid.
 */
enum CausticsStatus caustics_ball_count(const double *center,
                                        size_t n,
                                        double radius,
                                        uint64_t *out);

/**
 * Lattice points on `|α|² = j` within `C j^{μ/2}` of `√j ω`.
 *
 * # Safety
 * `omega` must point to `n` doubles and `out` must be valid.
 */
enum CausticsStatus caustics_sphere_cap_count(const double *omega,
                                              size_t n,
                                              uint64_t j,
                                              double mu,
                                              double cap_constant,
                                              uint64_t *out);

/**
 * `∫ dη / ((η² + α)² + 1)`.
 */
double caustics_m_alpha(double alpha);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CAUSTICS_H */
