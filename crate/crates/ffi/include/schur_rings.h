#ifndef SCHUR_RINGS_H
#define SCHUR_RINGS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every call.
typedef enum SchurStatus {
  SCHUR_STATUS_OK = 0,
  SCHUR_STATUS_NULL_POINTER = 1,
  SCHUR_STATUS_INVALID_ARGUMENT = 2,
  SCHUR_STATUS_NOT_PRIME_POWER = 3,
  SCHUR_STATUS_BOUND_EXCEEDED = 4,
  SCHUR_STATUS_BUDGET_EXHAUSTED = 5,
  // The value does not fit the requested fixed-width type.
  SCHUR_STATUS_OVERFLOW = 6,
  SCHUR_STATUS_PARSE_ERROR = 7,
  SCHUR_STATUS_INDEX_OUT_OF_RANGE = 8,
  // A bug on the library side, including caught panics.
  SCHUR_STATUS_INTERNAL = 9,
} SchurStatus;

// The rings found by one enumeration run.
typedef struct SchurEnumeration SchurEnumeration;

// A polynomial in `x`, the number of divisors of `p - 1`.
typedef struct SchurPolynomial SchurPolynomial;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last non-OK status on this thread; empty after success.
// Valid until the next call into the library on the same thread.
const char *schur_last_error(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void schur_string_free(char *s);

// Number of Schur rings over `Z_{p^n}` for odd prime `p`, as a decimal string.
enum SchurStatus schur_count_odd(uint64_t p, uint32_t n, char **out);

// As [`schur_count_odd`]; `Overflow` when the count exceeds 64 bits.
enum SchurStatus schur_count_odd_u64(uint64_t p, uint32_t n, uint64_t *out);

// Number of Schur rings over `Z_{2^n}`, as a decimal string.
enum SchurStatus schur_count_two(uint32_t n, char **out);

enum SchurStatus schur_count_two_u64(uint32_t n, uint64_t *out);

// `Omega(n)` for odd `p`.
enum SchurStatus schur_omega_odd(uint32_t n, struct SchurPolynomial **out);

// Degree; `-1` for the zero polynomial.
enum SchurStatus schur_poly_degree(const struct SchurPolynomial *poly, int64_t *out);

// Coefficient of `x^i` as a decimal string.
enum SchurStatus schur_poly_coeff(const struct SchurPolynomial *poly, uint32_t i, char **out);

// Canonical text, e.g. `x^2+2x+1`.
enum SchurStatus schur_poly_to_string(const struct SchurPolynomial *poly, char **out);

enum SchurStatus schur_poly_eval_u64(const struct SchurPolynomial *poly, uint64_t x, uint64_t *out);

// # Safety
// `poly` must come from this library and not have been freed. Null is ignored.
void schur_poly_free(struct SchurPolynomial *poly);

// Constructive enumeration over `Z_m`, `m` a prime power no larger than
// `bound`. `jobs = 0` uses the default thread pool.
enum SchurStatus schur_enumerate(uint64_t modulus,
                                 uint64_t bound,
                                 uint32_t jobs,
                                 struct SchurEnumeration **out);

// Exhaustive search over `Z_m` visiting at most `budget` states.
enum SchurStatus schur_enumerate_bruteforce(uint64_t modulus,
                                            uint64_t budget,
                                            struct SchurEnumeration **out);

enum SchurStatus schur_enumeration_count(const struct SchurEnumeration *e, size_t *out);

// Ring `index` in canonical order as `{"modulus", "blocks", "omega_image"}`.
enum SchurStatus schur_enumeration_ring_json(const struct SchurEnumeration *e,
                                             size_t index,
                                             char **out);

// Every ring as one JSON array.
enum SchurStatus schur_enumeration_dump_json(const struct SchurEnumeration *e, char **out);

// # Safety
// `e` must come from this library and not have been freed. Null is ignored.
void schur_enumeration_free(struct SchurEnumeration *e);

// Checks `{"modulus": n, "blocks": [[...], ...]}`. On `Ok`, `is_schur` is
// 1 or 0; when it is 0 and `violation` is non-null, a JSON description of
// the failed condition is written there.
enum SchurStatus schur_check_partition_json(const char *json, int32_t *is_schur, char **violation);

// Checks the generating-function identity through `z^order`; `two` selects
// `p = 2`. `ok` receives 1 or 0.
enum SchurStatus schur_verify_gf(int32_t two, size_t order, int32_t *ok);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SCHUR_RINGS_H */
