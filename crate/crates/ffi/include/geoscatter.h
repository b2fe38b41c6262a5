#ifndef GEOSCATTER_H
#define GEOSCATTER_H

#pragma once

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GsStatus {
  GS_STATUS_OK = 0,
  GS_STATUS_NULL_POINTER = 1,
  GS_STATUS_INVALID_INPUT = 2,
  GS_STATUS_DOMAIN = 3,
  GS_STATUS_OVERFLOW = 4,
  GS_STATUS_SINGULAR_MATRIX = 5,
  GS_STATUS_SINGULAR_ANGLE = 6,
  GS_STATUS_NON_CONVERGENCE = 7,
  GS_STATUS_PANIC = 8,
} GsStatus;

/*
 Opaque handle.
 */
typedef struct GsSystem GsSystem;

typedef struct GsComplex {
  double re;
  double im;
} GsComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Creates a system with `n` defects at `positions` with couplings
 `couplings_re + i couplings_im`; `couplings_im` may be NULL for real
 couplings. Writes the handle to `out`.

 # Safety
 Array arguments must hold `n` readable doubles; `out` must be writable.
 */
enum GsStatus gs_system_new(const double *positions,
                            const double *couplings_re,
                            const double *couplings_im,
                            size_t n,
                            double eta,
                            double lambda1,
                            double lambda2,
                            struct GsSystem **out);

/*
 # Safety
 `sys` must come from `gs_system_new` and not be used afterwards. NULL is ignored.
 */
void gs_system_free(struct GsSystem *sys);

/*
 First-order geometric amplitude `f₁` at `kσ = ksigma`.

 # Safety
 `sys` must be a live handle and `out` writable.
 */
enum GsStatus gs_f1(const struct GsSystem *sys,
                    double ksigma,
                    double theta0,
                    double theta,
                    struct GsComplex *out);

/*
 `|f₁|²/σ`.

 # Safety
 `sys` must be a live handle and `out` writable.
 */
enum GsStatus gs_cross_section(const struct GsSystem *sys,
                               double ksigma,
                               double theta0,
                               double theta,
                               double *out);

/*
 Transmission and reflection coefficients `t⁺`, `t⁻` of the flat problem.

 # Safety
 `sys` must be a live handle; `tplus` and `tminus` writable.
 */
enum GsStatus gs_t_coefficients(const struct GsSystem *sys,
                                double ksigma,
                                double theta0,
                                struct GsComplex *tplus,
                                struct GsComplex *tminus);

/*
 Scaled complementary error function `e^{z²} erfc(z)`.

 # Safety
 `out` must be writable.
 */
enum GsStatus gs_erfcx(struct GsComplex z, struct GsComplex *out);

/*
 Message of the last failed call on this thread; empty after a success.
 Valid until the next call on the same thread.
 */
const char *gs_last_error_message(void);

const char *gs_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GEOSCATTER_H */
