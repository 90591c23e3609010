/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef ACM_H
#define ACM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AcmStatus {
  ACM_STATUS_OK = 0,
  ACM_STATUS_NULL_ARGUMENT = 1,
  /**
   * Malformed JSON or expression, invalid UTF-8, or unknown built-in.
   */
  ACM_STATUS_INVALID_INPUT = 2,
  /**
   * Valid input outside what the computation accepts.
   */
  ACM_STATUS_PRECONDITION = 3,
  ACM_STATUS_PANIC = 4,
} AcmStatus;

/**
 * Opaque curve handle.
 */
typedef struct AcmCurve AcmCurve;

/**
 * Opaque manifold handle.
 */
typedef struct AcmManifold AcmManifold;

/**
 * Frenet apparatus at one parameter value. `normal` and `binormal` are
 * zero when the corresponding flag is false.
 */
typedef struct AcmFrenet {
  double t;
  double point[3];
  double tangent[3];
  double normal[3];
  double binormal[3];
  double kappa;
  double tau;
  bool normal_defined;
  bool binormal_defined;
  double orthonormality;
} AcmFrenet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL after a
 * success. Valid until the next call into this library on the thread.
 */
const char *acm_last_error_message(void);

/**
 * Byte offset of the last parse error on this thread, or -1.
 */
int64_t acm_last_error_offset(void);

/**
 * # Safety
 * `json` must be a NUL-terminated string; `out_handle` must be writable.
 */
enum AcmStatus acm_manifold_from_json(const char *json, struct AcmManifold **out_handle);

/**
 * # Safety
 * `name` must be a NUL-terminated string; `out_handle` must be writable.
 */
enum AcmStatus acm_manifold_builtin(const char *name, struct AcmManifold **out_handle);

/**
 * # Safety
 * `m` must come from this library and not be used afterwards. NULL is a no-op.
 */
void acm_manifold_free(struct AcmManifold *m);

/**
 * # Safety
 * `json` must be a NUL-terminated string; `out_handle` must be writable.
 */
enum AcmStatus acm_curve_from_json(const char *json, struct AcmCurve **out_handle);

/**
 * # Safety
 * `name` must be a NUL-terminated string; `out_handle` must be writable.
 */
enum AcmStatus acm_curve_builtin(const char *name, struct AcmCurve **out_handle);

/**
 * # Safety
 * `c` must come from this library and not be used afterwards. NULL is a no-op.
 */
void acm_curve_free(struct AcmCurve *c);

/**
 * Largest almost contact metric axiom residual over `n` seeded random
 * points of the sample box; `holds` also requires a positive definite
 * metric.
 *
 * # Safety
 * `m` must be a live handle; `residual` and `holds` must be writable.
 */
enum AcmStatus acm_manifold_verify(const struct AcmManifold *m,
                                   size_t n,
                                   uint64_t seed,
                                   double tol,
                                   double *residual,
                                   bool *holds);

/**
 * Trans-Sasakian (alpha, beta) at a point, with the least-squares residual.
 *
 * # Safety
 * `m` must be a live handle; `point` must hold 3 doubles; outputs writable.
 */
enum AcmStatus acm_classify_at(const struct AcmManifold *m,
                               const double *point,
                               double *alpha,
                               double *beta,
                               double *residual);

/**
 * # Safety
 * `m`, `c` must be live handles; `frame` must be writable.
 */
enum AcmStatus acm_frenet(const struct AcmManifold *m,
                          const struct AcmCurve *c,
                          double t,
                          struct AcmFrenet *frame);

/**
 * Largest |η(γ′)| over the curve's samples. A curve leaving the chart
 * domain or not of unit speed is a precondition failure; `max_eta` is
 * still written.
 *
 * # Safety
 * `m`, `c` must be live handles; outputs writable.
 */
enum AcmStatus acm_is_almost_contact(const struct AcmManifold *m,
                                     const struct AcmCurve *c,
                                     double tol,
                                     double *max_eta,
                                     bool *holds);

/**
 * First integral of the sigma ODE at (sigma, mu); requires |sigma| < 1.
 *
 * # Safety
 * `value` must be writable.
 */
enum AcmStatus acm_sigma_first_integral(double sigma, double mu, double *value);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ACM_H */
