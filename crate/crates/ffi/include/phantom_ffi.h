#ifndef PHANTOM_FFI_H
#define PHANTOM_FFI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. `PH_STATUS_OK` is zero; every other value is an error.
 */
typedef enum PhStatus {
  PH_STATUS_OK = 0,
  PH_STATUS_NULL_POINTER = 1,
  PH_STATUS_INVALID_UTF8 = 2,
  PH_STATUS_SYNTAX_ERROR = 3,
  PH_STATUS_NOT_INVERTIBLE = 4,
  PH_STATUS_ROOT_DOMAIN = 5,
  PH_STATUS_LOG_DOMAIN = 6,
  PH_STATUS_BAD_ALPHA = 7,
  PH_STATUS_OUT_OF_DOMAIN = 8,
  PH_STATUS_QUADRATURE_FAILURE = 9,
  PH_STATUS_UNKNOWN_OUTCOME = 10,
  PH_STATUS_CONDITIONING_DEGENERATE = 11,
  PH_STATUS_BAD_PARTITION = 12,
  PH_STATUS_BAD_COEFFICIENTS = 13,
  PH_STATUS_INVALID_MEASURE = 14,
  PH_STATUS_INVALID_VARIABLE = 15,
  PH_STATUS_BAD_ORDER = 16,
  PH_STATUS_EMPTY_RANGE = 17,
  PH_STATUS_DEGENERATE_VARIANCE = 18,
  PH_STATUS_BAD_PARAMETER = 19,
  PH_STATUS_BAD_VARIANT = 20,
  PH_STATUS_SCHEMA = 21,
  PH_STATUS_PANIC = 99,
} PhStatus;

/**
 * Orders accepted by comparison and CDF functions.
 */
typedef enum PhOrder {
  PH_ORDER_LEX = 0,
  /**
   * The alpha map; the `alpha` argument must be positive.
   */
  PH_ORDER_ALPHA = 1,
  PH_ORDER_REAL_TERM = 2,
  PH_ORDER_ABS_NORM = 3,
} PhOrder;

typedef enum PhLaw {
  PH_LAW_WLLN = 0,
  PH_LAW_CLT = 1,
  PH_LAW_SLLN = 2,
} PhLaw;

typedef enum PhSelection {
  PH_SELECTION_REAL_COMPONENT = 0,
  PH_SELECTION_REDUCED_COMPONENT = 1,
  PH_SELECTION_MIDPOINT = 2,
} PhSelection;

/**
 * Opaque discrete phantom random variable.
 */
typedef struct PhDiscrete PhDiscrete;

/**
 * Opaque finite phantom probability measure.
 */
typedef struct PhMeasure PhMeasure;

/**
 * A phantom number `re + p*ph`.
 */
typedef struct PhPhantom {
  double re;
  double ph;
} PhPhantom;

/**
 * Both sides of an inequality and whether it holds.
 */
typedef struct PhBound {
  struct PhPhantom lhs;
  struct PhPhantom rhs;
  bool holds;
} PhBound;

/**
 * Scalar results of a simulation. Absent statistics are NaN.
 */
typedef struct PhSimSummary {
  double empirical_mean;
  double target_mean;
  double deviation;
  double ks_statistic;
  double ks_raw;
  double slln_fraction;
} PhSimSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the last failed call on this thread, or an empty string.
 * The pointer stays valid until the next call into this library on the
 * same thread.
 */
const char *ph_last_error_message(void);

struct PhPhantom ph_add(struct PhPhantom a, struct PhPhantom b);

struct PhPhantom ph_sub(struct PhPhantom a, struct PhPhantom b);

struct PhPhantom ph_mul(struct PhPhantom a, struct PhPhantom b);

struct PhPhantom ph_conjugate(struct PhPhantom z);

struct PhPhantom ph_exp(struct PhPhantom z);

/**
 * The reduction `re + ph`.
 */
double ph_reduction(struct PhPhantom z);

/**
 * The modulus `sqrt((re^2 + (re + ph)^2) / 2)`.
 */
double ph_abs(struct PhPhantom z);

bool ph_is_zero_divisor(struct PhPhantom z);

/**
 * # Safety
 * `out` must be null or valid for writing one `PhPhantom`.
 */
enum PhStatus ph_inverse(struct PhPhantom z, struct PhPhantom *out);

/**
 * # Safety
 * `out` must be null or valid for writing one `PhPhantom`.
 */
enum PhStatus ph_div(struct PhPhantom a, struct PhPhantom b, struct PhPhantom *out);

/**
 * # Safety
 * `out` must be null or valid for writing one `PhPhantom`.
 */
enum PhStatus ph_pow_int(struct PhPhantom z, int32_t n, struct PhPhantom *out);

/**
 * # Safety
 * `out` must be null or valid for writing one `PhPhantom`.
 */
enum PhStatus ph_nth_root(struct PhPhantom z, uint32_t n, struct PhPhantom *out);

/**
 * # Safety
 * `out` must be null or valid for writing one `PhPhantom`.
 */
enum PhStatus ph_ln(struct PhPhantom z, struct PhPhantom *out);

/**
 * # Safety
 * `out` must be null or valid for writing one `f64`.
 */
enum PhStatus ph_alpha_value(struct PhPhantom z, double alpha, double *out);

/**
 * Writes -1, 0, or 1 as `a` is below, equivalent to, or above `b`.
 *
 * # Safety
 * `out` must be null or valid for writing one `i32`.
 */
enum PhStatus ph_compare(struct PhPhantom a,
                         struct PhPhantom b,
                         enum PhOrder order,
                         double alpha,
                         int32_t *out);

/**
 * Evaluates an expression such as `"(1+2*p)^3"`.
 *
 * # Safety
 * `src` must be null or a NUL-terminated string; `out` must be null or
 * valid for writing one `PhPhantom`.
 */
enum PhStatus ph_eval(const char *src, struct PhPhantom *out);

/**
 * Renders `z` as `"a + p*b"` at 12 significant digits into `buf`,
 * truncating to `cap - 1` bytes plus NUL. Returns the full length
 * excluding the NUL, like `snprintf`.
 *
 * # Safety
 * `buf` must be null or valid for writing `cap` bytes.
 */
size_t ph_render(struct PhPhantom z, char *buf, size_t cap);

/**
 * Builds and validates a measure from `n` labels and weights.
 *
 * # Safety
 * `labels` must point to `n` NUL-terminated strings, `weights` to `n`
 * values, and `out` must be valid for writing one pointer. Release the
 * result with [`ph_measure_free`].
 */
enum PhStatus ph_measure_new(const char *const *labels,
                             const struct PhPhantom *weights,
                             size_t n,
                             bool strict,
                             struct PhMeasure **out);

/**
 * Builds and validates a measure from a JSON document
 * `{"mode": ..., "outcomes": [{"label": ..., "re": ..., "ph": ...}]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` valid for writing one
 * pointer. Release the result with [`ph_measure_free`].
 */
enum PhStatus ph_measure_from_json(const char *json, struct PhMeasure **out);

/**
 * # Safety
 * `m` must be null or a pointer returned by this library and not yet
 * freed.
 */
void ph_measure_free(struct PhMeasure *m);

/**
 * `P(A)` for the event of the `k` outcome indices in `a`.
 *
 * # Safety
 * `m` must be a live measure handle, `a` must point to `k` indices, and
 * `out` must be valid for writing one `PhPhantom`.
 */
enum PhStatus ph_measure_prob(const struct PhMeasure *m,
                              const size_t *a,
                              size_t k,
                              struct PhPhantom *out);

/**
 * `P(A | B)`; needs a strict measure and an invertible `P(B)`.
 *
 * # Safety
 * `m` must be a live measure handle, `a` and `b` must point to `ka` and
 * `kb` indices, and `out` must be valid for writing one `PhPhantom`.
 */
enum PhStatus ph_measure_conditional(const struct PhMeasure *m,
                                     const size_t *a,
                                     size_t ka,
                                     const size_t *b,
                                     size_t kb,
                                     struct PhPhantom *out);

/**
 * Builds a discrete variable from `n` values and probabilities.
 *
 * # Safety
 * `values` and `probs` must point to `n` values each and `out` must be
 * valid for writing one pointer. Release with [`ph_discrete_free`].
 */
enum PhStatus ph_discrete_new(const struct PhPhantom *values,
                              const struct PhPhantom *probs,
                              size_t n,
                              struct PhDiscrete **out);

/**
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum PhStatus ph_discrete_bernoulli(struct PhPhantom p, struct PhDiscrete **out);

/**
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum PhStatus ph_discrete_binomial(uint32_t n, struct PhPhantom p, struct PhDiscrete **out);

/**
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum PhStatus ph_discrete_geometric(struct PhPhantom p, struct PhDiscrete **out);

/**
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum PhStatus ph_discrete_poisson(struct PhPhantom lambda, struct PhDiscrete **out);

/**
 * # Safety
 * `x` must be null or a pointer returned by this library and not yet
 * freed.
 */
void ph_discrete_free(struct PhDiscrete *x);

/**
 * `E[X^n]`.
 *
 * # Safety
 * `x` must be a live handle and `out` valid for writing one `PhPhantom`.
 */
enum PhStatus ph_discrete_moment(const struct PhDiscrete *x, uint32_t n, struct PhPhantom *out);

/**
 * # Safety
 * `x` must be a live handle and `out` valid for writing one `PhPhantom`.
 */
enum PhStatus ph_discrete_variance(const struct PhDiscrete *x, struct PhPhantom *out);

/**
 * # Safety
 * `x` must be a live handle and `out` valid for writing one `PhPhantom`.
 */
enum PhStatus ph_discrete_mgf(const struct PhDiscrete *x,
                              struct PhPhantom zeta,
                              struct PhPhantom *out);

/**
 * `P(X <= z)` under `order`; only lex and alpha orders are accepted.
 *
 * # Safety
 * `x` must be a live handle and `out` valid for writing one `PhPhantom`.
 */
enum PhStatus ph_discrete_cdf(const struct PhDiscrete *x,
                              struct PhPhantom z,
                              enum PhOrder order,
                              double alpha,
                              struct PhPhantom *out);

/**
 * Markov's inequality; `variant` is 1, 2, or 3 for the order, abs-order,
 * and real-modulus forms. Comparisons use the lexicographic order.
 *
 * # Safety
 * `x` must be a live handle and `out` valid for writing one `PhBound`.
 */
enum PhStatus ph_markov(const struct PhDiscrete *x,
                        struct PhPhantom z,
                        uint32_t variant,
                        struct PhBound *out);

/**
 * Chebyshev's inequality at `c` standard deviations; `rhs` is `1/c^2`.
 * Both sides are real, carried in the `re` fields.
 *
 * # Safety
 * `x` must be a live handle and `out` valid for writing one `PhBound`.
 */
enum PhStatus ph_chebyshev(const struct PhDiscrete *x, double c, struct PhBound *out);

/**
 * Runs one experiment. `epsilon` is used by the strong law only.
 *
 * # Safety
 * `x` must be a live handle and `out` valid for writing one
 * `PhSimSummary`.
 */
enum PhStatus ph_simulate(const struct PhDiscrete *x,
                          enum PhLaw law,
                          enum PhSelection selection,
                          uint64_t seed,
                          size_t reps,
                          size_t n,
                          double epsilon,
                          struct PhSimSummary *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PHANTOM_FFI_H */
