#ifndef TRANSCEND_H
#define TRANSCEND_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call. `TR_OK` is zero.
 */
typedef enum TrStatus {
  TR_OK = 0,
  TR_NULL_POINTER = 1,
  TR_INVALID_UTF8 = 2,
  TR_PARSE = 3,
  TR_INVALID_PARAMETER = 4,
  TR_INVALID_INDEX_MAP = 5,
  TR_INDEX_OUT_OF_RANGE = 6,
  TR_OVERFLOW = 7,
  TR_NO_TAIL_GUARANTEE = 8,
  TR_NOT_FOUND_IN_WINDOW = 9,
  TR_ALPHA_TOO_SMALL = 10,
  TR_HYPOTHESIS_FAILED = 11,
  TR_WITNESS_FAILED = 12,
  TR_NOT_FOUND_BELOW_N_MAX = 13,
  TR_INCONCLUSIVE = 14,
  TR_ENUMERATION_TOO_LARGE = 15,
  TR_SPEC_MISMATCH = 16,
  TR_INTERNAL = 17,
  TR_PANIC = 18,
} TrStatus;

/**
 * Opaque sequence handle.
 */
typedef struct TrSeries TrSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or NULL.
 * The pointer stays valid until the next `tr_*` call on the same thread.
 */
const char *tr_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *tr_version(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from a `tr_*` output parameter and not be freed twice.
 */
void tr_string_free(char *s);

/**
 * Parses a sequence spec from JSON. `digit_budget` of zero selects the default.
 *
 * # Safety
 * `spec_json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum TrStatus tr_series_new(const char *spec_json, uint64_t digit_budget, struct TrSeries **out);

/**
 * Destroys a handle. NULL is ignored.
 *
 * # Safety
 * `series` must come from `tr_series_new` and not be freed twice.
 */
void tr_series_free(struct TrSeries *series);

/**
 * Canonical JSON of the spec behind the handle.
 *
 * # Safety
 * Pointers must be valid as described in the header.
 */
enum TrStatus tr_series_spec_json(const struct TrSeries *series, char **out);

/**
 * Term `a_n` (1-based) in decimal.
 *
 * # Safety
 * Pointers must be valid as described in the header.
 */
enum TrStatus tr_series_term(const struct TrSeries *series, uint64_t n, char **out);

/**
 * Reduced partial sum through index `m` as `{"m","p","q"}` JSON.
 *
 * # Safety
 * Pointers must be valid as described in the header.
 */
enum TrStatus tr_series_partial_sum(const struct TrSeries *series, uint64_t m, char **out);

/**
 * Rational enclosure of the series value built from the first `m` terms.
 *
 * # Safety
 * Pointers must be valid as described in the header.
 */
enum TrStatus tr_series_enclose(const struct TrSeries *series, uint64_t m, char **out);

/**
 * Per-index growth report for exponent `alpha` (e.g. `"5/2"`) on `from..=to`.
 *
 * # Safety
 * Pointers must be valid as described in the header.
 */
enum TrStatus tr_series_check_growth(const struct TrSeries *series,
                                     const char *alpha,
                                     uint64_t from,
                                     uint64_t to,
                                     char **out);

/**
 * Approximation certificate for exponent `alpha` over witnesses `from..=to`.
 *
 * # Safety
 * Pointers must be valid as described in the header.
 */
enum TrStatus tr_series_certify(const struct TrSeries *series,
                                const char *alpha,
                                uint64_t from,
                                uint64_t to,
                                char **out);

/**
 * Measure bound for degree `d`, height `height` and exponents `alpha`, `k`.
 *
 * # Safety
 * Pointers must be valid as described in the header.
 */
enum TrStatus tr_measure_bound(uint64_t d,
                               uint64_t height,
                               const char *alpha,
                               const char *k,
                               char **out);

/**
 * Verifies the measure bound for the polynomial with comma-separated
 * coefficients `coeffs` (constant term first), declared degree `d` and
 * height `height`.
 *
 * # Safety
 * Pointers must be valid as described in the header.
 */
enum TrStatus tr_series_verify_measure(const struct TrSeries *series,
                                       const char *alpha,
                                       const char *k,
                                       const char *coeffs,
                                       uint64_t d,
                                       uint64_t height,
                                       uint32_t max_refinements,
                                       char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRANSCEND_H */
