#ifndef DW1_H
#define DW1_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes for every fallible entry point.
 */
typedef enum Dw1Status {
  DW1_STATUS_OK = 0,
  /**
   * Null pointer, malformed input, or an invalid configuration.
   */
  DW1_STATUS_INVALID_ARGUMENT = 1,
  /**
   * The requested tolerance could not be certified.
   */
  DW1_STATUS_TOLERANCE_UNREACHABLE = 2,
  /**
   * The quantity is provably infinite.
   */
  DW1_STATUS_DIVERGENT = 3,
  /**
   * Degenerate instance (zero direction, empty support, …).
   */
  DW1_STATUS_DEGENERATE = 4,
  /**
   * The provided buffer is too small; the required size was reported.
   */
  DW1_STATUS_BUFFER_TOO_SMALL = 5,
  /**
   * An internal invariant failed.
   */
  DW1_STATUS_INTERNAL = 6,
} Dw1Status;

/**
 * Opaque weight handle.
 */
typedef struct Dw1Weight Dw1Weight;

/**
 * Closed interval of best-approximation coefficients and the distance,
 * reported as double approximations of exact rationals.
 */
typedef struct Dw1Interval {
  double lo;
  double hi;
  double dist;
  /**
   * Nonzero when the minimizer is unique.
   */
  uint8_t singleton;
} Dw1Interval;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the current thread's last error message into `buf` and returns
 * the full length of the message including the NUL terminator. With a
 * null or too-small buffer nothing is copied; call again with the
 * returned capacity.
 */
uintptr_t dw1_last_error(char *buf, uintptr_t cap);

/**
 * Static version string of the underlying library, NUL-terminated.
 */
const char *dw1_version(void);

/**
 * The harmonic weight `w(n) = 1/n`. Never fails.
 */
struct Dw1Weight *dw1_weight_harmonic(void);

/**
 * Power weight `w(n) = n^{-alpha}`, `0 < alpha ≤ 1`.
 */
enum Dw1Status dw1_weight_power(double alpha, struct Dw1Weight **out);

/**
 * Finite rational weight table `nums[i]/dens[i]` continued harmonically
 * past the table (scaled to match the last entry).
 */
enum Dw1Status dw1_weight_table(const int64_t *nums,
                                const int64_t *dens,
                                uintptr_t len,
                                struct Dw1Weight **out);

/**
 * Releases a weight handle. Null is a no-op.
 */
void dw1_weight_free(struct Dw1Weight *w);

/**
 * Certified norm of the finite sequence `values` in d(w,1): writes an
 * enclosure center and half-width with `*error ≤ tol`.
 */
enum Dw1Status dw1_lorentz_norm(const struct Dw1Weight *w,
                                const double *values,
                                uintptr_t len,
                                double tol,
                                double *value,
                                double *error);

/**
 * Exact interval of minimizers of `‖x − c·y‖` over `c`, for finite
 * rational `x` (`x_num[i]/x_den[i]`) and `y`, with an exact weight.
 */
enum Dw1Status dw1_projection_interval_exact(const struct Dw1Weight *w,
                                             const int64_t *x_num,
                                             const int64_t *x_den,
                                             uintptr_t x_len,
                                             const int64_t *y_num,
                                             const int64_t *y_den,
                                             uintptr_t y_len,
                                             struct Dw1Interval *out);

/**
 * Runs the certificate and continuous-selection checks for a named preset
 * (`example1` … `example4`) and writes a JSON report. `needed` receives
 * the required buffer size including the NUL terminator.
 */
enum Dw1Status dw1_selection_check_preset(const char *name,
                                          double tol,
                                          char *buf,
                                          uintptr_t cap,
                                          uintptr_t *needed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DW1_H */
