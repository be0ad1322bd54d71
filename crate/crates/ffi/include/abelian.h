#ifndef ABELIAN_H
#define ABELIAN_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AbMethod {
  AB_METHOD_FAST = 0,
  AB_METHOD_SNF = 1,
} AbMethod;

/**
 * Result of every fallible call. Values 2 to 5 match the CLI exit codes.
 */
typedef enum AbStatus {
  AB_STATUS_OK = 0,
  AB_STATUS_PARSE = 2,
  AB_STATUS_ARITY = 3,
  AB_STATUS_FACTORIZATION = 4,
  AB_STATUS_CAPACITY = 5,
  AB_STATUS_NULL_ARGUMENT = 6,
  AB_STATUS_INVALID_UTF8 = 7,
  AB_STATUS_INTERNAL = 8,
} AbStatus;

/**
 * A finite abelian group `Z/d_1 + ... + Z/d_k`.
 */
typedef struct AbGroup AbGroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a group from comma-separated positive moduli.
 *
 * # Safety
 * `moduli` must be a NUL-terminated string and `out` writable.
 */
enum AbStatus ab_group_new(const char *moduli, struct AbGroup **out);

/**
 * Releases a group. Null is ignored.
 *
 * # Safety
 * `g` must come from `ab_group_new` and not be used afterwards.
 */
void ab_group_free(struct AbGroup *g);

/**
 * `|G|` in decimal.
 *
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
enum AbStatus ab_group_order(const struct AbGroup *g, char **out);

/**
 * Invariant factors `m_1 | ... | m_k` as a comma-separated list, `"1"` for
 * the trivial group.
 *
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
enum AbStatus ab_group_invariant_factors(const struct AbGroup *g, char **out);

/**
 * Isomorphism class of `G/<x>` in the form `C2 x C8 x C8`.
 *
 * # Safety
 * `g` must be a live handle, `x` NUL-terminated and `out` writable.
 */
enum AbStatus ab_quotient(const struct AbGroup *g, const char *x, enum AbMethod method, char **out);

/**
 * `G/<x>` as JSON with `order`, `invariant_factors` and `primary_parts`.
 *
 * # Safety
 * `g` must be a live handle, `x` NUL-terminated and `out` writable.
 */
enum AbStatus ab_quotient_json(const struct AbGroup *g,
                               const char *x,
                               enum AbMethod method,
                               char **out);

/**
 * Writes 1 to `out` when some automorphism maps `x` to `y`, else 0.
 *
 * # Safety
 * `g` must be a live handle, `x` and `y` NUL-terminated and `out` writable.
 */
enum AbStatus ab_are_automorphic(const struct AbGroup *g,
                                 const char *x,
                                 const char *y,
                                 enum AbMethod method,
                                 int *out);

/**
 * Automorphism orbits as the JSON document printed by
 * `abelian orbits --format json`. Fails with `AB_STATUS_CAPACITY` when more
 * than `cap` reduced forms would be enumerated.
 *
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
enum AbStatus ab_orbits_json(const struct AbGroup *g, uint64_t cap, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void ab_string_free(char *s);

/**
 * Message of the last failed call on this thread, or null after a
 * success. Valid until the next call on the same thread.
 */
const char *ab_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ABELIAN_H */
