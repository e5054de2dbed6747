#ifndef PAIRPOLY_H
#define PAIRPOLY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result codes. Zero is success.
typedef enum PairpolyStatus {
  PAIRPOLY_STATUS_OK = 0,
  // Parameters outside the domain (genus, degree, window, tau range).
  PAIRPOLY_STATUS_DOMAIN = 1,
  // tau lies on a wall.
  PAIRPOLY_STATUS_NON_GENERIC = 2,
  // Truncation buffer too small.
  PAIRPOLY_STATUS_INSUFFICIENT_BUFFER = 3,
  PAIRPOLY_STATUS_NOT_POLYNOMIAL = 4,
  PAIRPOLY_STATUS_IDENTITY = 5,
  // Index past the end, or a value that does not fit the output type.
  PAIRPOLY_STATUS_OUT_OF_RANGE = 6,
  PAIRPOLY_STATUS_NEGATIVE_EXPONENT = 7,
  PAIRPOLY_STATUS_NULL_POINTER = 8,
  PAIRPOLY_STATUS_PANIC = 9,
} PairpolyStatus;

// Betti numbers of one moduli space together with the ledger that produced them.
typedef struct PairpolyBetti PairpolyBetti;

// A truncated power series with integer coefficients.
typedef struct PairpolySeries PairpolySeries;

// The stratification index at one generic tau.
typedef struct PairpolyStrata PairpolyStrata;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread. The pointer stays
// valid until the next failing call on the same thread; do not free it.
const char *pairpoly_last_error(void);

// Static name of a status code, e.g. `"DOMAIN"`.
const char *pairpoly_status_name(enum PairpolyStatus status);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from a `pairpoly_*` function returning `char *` and not be freed twice.
void pairpoly_string_free(char *s);

// Computes the Betti numbers for genus `g`, degree `d` and window `n`
// (`tau` in `(max{d/2, n-1}, n)`). `buffer` is the truncation buffer above
// the top degree; 8 is the usual choice.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum PairpolyStatus pairpoly_betti_new(int64_t g,
                                       int64_t d,
                                       int64_t n,
                                       uint32_t buffer,
                                       struct PairpolyBetti **out);

// Number of Betti numbers, `2(d + 2g - 2) + 1`.
//
// # Safety
// `h` must be a live handle from [`pairpoly_betti_new`].
size_t pairpoly_betti_len(const struct PairpolyBetti *h);

// Writes `b_k` to `out`.
//
// # Safety
// `h` must be a live handle and `out` writable.
enum PairpolyStatus pairpoly_betti_get(const struct PairpolyBetti *h, size_t k, int64_t *out);

// True when degree, duality, positivity, divisibility, Euler characteristic,
// `b_0` and `b_1` all check out.
//
// # Safety
// `h` must be a live handle.
bool pairpoly_betti_checks_pass(const struct PairpolyBetti *h);

// The Betti table as JSON, with the contribution ledger if `with_ledger`.
//
// # Safety
// `h` must be a live handle. Free the result with [`pairpoly_string_free`].
char *pairpoly_betti_to_json(const struct PairpolyBetti *h, bool with_ledger);

// # Safety
// `h` must be null or a handle from [`pairpoly_betti_new`] not yet freed.
void pairpoly_betti_free(struct PairpolyBetti *h);

// Change of the Poincaré polynomial across the wall `tau = n`
// (`d/2 < n <= d - 1`), without the Jacobian factor if `fixed_det`.
//
// # Safety
// `out` must be writable.
enum PairpolyStatus pairpoly_flip_difference(int64_t g,
                                             int64_t d,
                                             int64_t n,
                                             uint32_t buffer,
                                             bool fixed_det,
                                             struct PairpolySeries **out);

// The Poincaré polynomial for window `n` by coefficient extraction, an
// independent route to the one used by [`pairpoly_betti_new`].
//
// # Safety
// `out` must be writable.
enum PairpolyStatus pairpoly_closed_form(int64_t g,
                                         int64_t d,
                                         int64_t n,
                                         uint32_t buffer,
                                         struct PairpolySeries **out);

// Number of stored coefficients (truncation order + 1).
//
// # Safety
// `h` must be a live handle.
size_t pairpoly_series_len(const struct PairpolySeries *h);

// Writes the coefficient of `t^k` to `out`.
//
// # Safety
// `h` must be a live handle and `out` writable.
enum PairpolyStatus pairpoly_series_get(const struct PairpolySeries *h, size_t k, int64_t *out);

// Human-readable form such as `1 + 4t + t^2`.
//
// # Safety
// `h` must be a live handle. Free the result with [`pairpoly_string_free`].
char *pairpoly_series_to_string(const struct PairpolySeries *h);

// # Safety
// `h` must be null or a live series handle.
void pairpoly_series_free(struct PairpolySeries *h);

// Enumerates the strata at `tau = tau_num / tau_den`, listing the `Ib`
// family up to `j_max` (at least `d`).
//
// # Safety
// `out` must be writable.
enum PairpolyStatus pairpoly_strata_new(int64_t g,
                                        int64_t d,
                                        int64_t tau_num,
                                        int64_t tau_den,
                                        int64_t j_max,
                                        struct PairpolyStrata **out);

// # Safety
// `h` must be a live handle.
size_t pairpoly_strata_len(const struct PairpolyStrata *h);

// Describes stratum `i` (in increasing `delta`). `class_name` receives a
// static string (`"OPEN"`, `"Ia_SS"`, `"Ia"`, `"Ib"`, `"IIplus"`, `"IIminus"`);
// `j` is `INT64_MIN` for strata without an integer slope; `delta` is written
// as a reduced fraction.
//
// # Safety
// `h` must be a live handle; all outputs must be writable.
enum PairpolyStatus pairpoly_strata_get(const struct PairpolyStrata *h,
                                        size_t i,
                                        const char **class_name,
                                        int64_t *j,
                                        int64_t *delta_num,
                                        int64_t *delta_den);

// # Safety
// `h` must be null or a live strata handle.
void pairpoly_strata_free(struct PairpolyStrata *h);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* PAIRPOLY_H */
