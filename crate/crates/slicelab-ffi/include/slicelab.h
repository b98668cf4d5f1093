/* C interface to the slicelab time-slice approximants. Generated by cbindgen from the slicelab-ffi crate; edit the Rust source, not this file. */

#ifndef SLICELAB_H
#define SLICELAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum {
  /**
   * The call succeeded and its out parameters are valid.
   */
  SL_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  SL_STATUS_NULL_ARGUMENT,
  /**
   * An argument failed validation (zero denominator, spin below 1/2,
   * unsupported order, an operation the model does not define, …).
   */
  SL_STATUS_INVALID_ARGUMENT,
  /**
   * The evaluation itself was rejected (non-positive beta, quadrature
   * dimension past the cap, zero samples, indefinite coupling, …).
   */
  SL_STATUS_EVAL_FAILED,
  /**
   * An internal panic was caught at the boundary.
   */
  SL_STATUS_PANIC,
} SlStatus;

/**
 * Opaque model handle: family, couplings, and slice count.
 */
typedef struct SlModel SlModel;

/**
 * One field-integral estimate.
 */
typedef struct {
  /**
   * Estimated value.
   */
  double value;
  /**
   * One standard error; exactly 0 for deterministic quadrature.
   */
  double std_error;
  /**
   * Mean sign of the integrand's real part; NaN when the estimator has
   * no sampling measure (quadrature).
   */
  double avg_sign;
  /**
   * Integrand evaluations behind the estimate.
   */
  uint64_t n_samples;
} SlEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Explanation of the most recent failure on this thread, as a NUL-terminated
 * string owned by the library. Valid until the next failing call on the same
 * thread; empty before any failure.
 */
const char *sl_last_error_message(void);

/**
 * Crate version as a static NUL-terminated string.
 */
const char *sl_version(void);

/**
 * Build an oscillator approximant with `l` slices (odd). On success writes
 * a handle the caller must release with [`sl_model_free`].
 */
SlStatus sl_model_sho(uint32_t l, SlModel **out);

/**
 * Build a single self-interacting spin: magnitude `two_s`/2, coupling
 * `j_num`/`j_den`, `l` slices.
 */
SlStatus sl_model_spin(uint32_t two_s, int64_t j_num, int64_t j_den, uint32_t l, SlModel **out);

/**
 * Build a spin-1/2 dimer: exchange `j_num`/`j_den` (nonzero), self-coupling
 * `jprime_num`/`jprime_den`, `l` slices.
 */
SlStatus sl_model_dimer(int64_t j_num,
                        int64_t j_den,
                        int64_t jprime_num,
                        int64_t jprime_den,
                        uint32_t l,
                        SlModel **out);

/**
 * Release a model handle. Null is ignored.
 *
 * # Safety
 * `model` must have come from one of the `sl_model_*` constructors and must
 * not be used afterwards.
 */
void sl_model_free(SlModel *model);

/**
 * Partition-function approximant Z_L(beta).
 *
 * # Safety
 * `model` must be a live handle; `out` must point to a writable f64.
 */
SlStatus sl_z(const SlModel *model, double beta, double *out);

/**
 * Log-derivative energy U_L(beta) = −∂_beta ln Z_L.
 *
 * # Safety
 * As for [`sl_z`].
 */
SlStatus sl_u(const SlModel *model, double beta, double *out);

/**
 * Hamiltonian-average energy Ũ_L(beta). Defined for the spin models only;
 * the oscillator returns `SL_STATUS_INVALID_ARGUMENT`.
 *
 * # Safety
 * As for [`sl_z`].
 */
SlStatus sl_utilde(const SlModel *model, double beta, double *out);

/**
 * Heat capacity C_L(beta).
 *
 * # Safety
 * As for [`sl_z`].
 */
SlStatus sl_heat_capacity(const SlModel *model, double beta, double *out);

/**
 * Smooth density-of-states value g_L(e) for the oscillator. The spin
 * models' densities are delta combs (see [`sl_dos_json`]) and return
 * `SL_STATUS_INVALID_ARGUMENT` here.
 *
 * # Safety
 * As for [`sl_z`].
 */
SlStatus sl_dos_at(const SlModel *model, double e, double *out);

/**
 * Exact density of states of a spin model as JSON:
 * `{"terms": [{"center": "p/q", "order": k, "coeff": "p/q"}, …]}`, one
 * entry per delta line. The string is owned by the caller; release it with
 * [`sl_string_free`]. The oscillator's density is smooth (see
 * [`sl_dos_at`]) and returns `SL_STATUS_INVALID_ARGUMENT`.
 *
 * # Safety
 * `model` must be a live handle; `out` must point to a writable `char *`.
 */
SlStatus sl_dos_json(const SlModel *model, char **out);

/**
 * Exact Taylor coefficients of Z_L about beta = 0 as JSON:
 * `{"coefficients": ["p/q", …]}`, degrees 0 through `order` (at most 8).
 * Spin models only; the string is released with [`sl_string_free`].
 *
 * # Safety
 * As for [`sl_dos_json`].
 */
SlStatus sl_series_json(const SlModel *model, uint32_t order, char **out);

/**
 * Evaluate Z_L by tensor-product Gauss–Hermite quadrature with
 * `nodes_per_dim` nodes per field dimension (24 is a good default). Spin
 * models with positive-definite coupling and at most 6 field dimensions
 * only.
 *
 * # Safety
 * `model` must be a live handle; `out` must point to a writable
 * [`SlEstimate`].
 */
SlStatus sl_quadrature_z(const SlModel *model,
                         double beta,
                         uint32_t nodes_per_dim,
                         SlEstimate *out);

/**
 * Sample Z_L and U_L by seeded Monte Carlo over the auxiliary fields, with
 * the integration contour picked from the coupling signature. Identical
 * `(model, beta, n_samples, seed)` reproduce identical estimates bit for
 * bit. Either out pointer may be null to skip that estimate.
 *
 * # Safety
 * `model` must be a live handle; non-null out pointers must be writable.
 */
SlStatus sl_monte_carlo(const SlModel *model,
                        double beta,
                        uint64_t n_samples,
                        uint64_t seed,
                        SlEstimate *out_z,
                        SlEstimate *out_u);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must have come from an `sl_*_json` call and must not be used
 * afterwards.
 */
void sl_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SLICELAB_H */
