#ifndef OCS_H
#define OCS_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum OcsStatus {
  OCS_STATUS_OK = 0,
  OCS_STATUS_NULL_POINTER = 1,
  OCS_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed JSON or spec.
   */
  OCS_STATUS_PARSE = 3,
  /**
   * Any other domain error.
   */
  OCS_STATUS_DOMAIN = 4,
  /**
   * The request is outside the validity of the method.
   */
  OCS_STATUS_REFUSED = 5,
  OCS_STATUS_CAP_EXCEEDED = 6,
  OCS_STATUS_OUT_OF_RANGE = 7,
  OCS_STATUS_PANIC = 8,
} OcsStatus;

/**
 * A finite poset.
 */
typedef struct OcsPoset OcsPoset;

/**
 * A space with its group action and special orbits.
 */
typedef struct OcsSpace OcsSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *ocs_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void ocs_string_free(char *s);

/**
 * Static version string.
 */
const char *ocs_version(void);

/**
 * Parses a poset from `{"n", "covers", "rank"?, "elements"?}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum OcsStatus ocs_poset_from_json(const char *json, struct OcsPoset **out);

/**
 * Enumerates `D_n^T(G,S)` from a G-set or space spec.
 *
 * # Safety
 * `spec_json` must be a NUL-terminated string; `out` must be writable.
 */
enum OcsStatus ocs_dowling_build(const char *spec_json,
                                 size_t n,
                                 size_t cap,
                                 struct OcsPoset **out);

/**
 * Element counts by enumeration and by the species formula.
 *
 * # Safety
 * `spec_json` must be a NUL-terminated string; both outputs writable.
 */
enum OcsStatus ocs_dowling_count(const char *spec_json,
                                 size_t n,
                                 size_t cap,
                                 uint64_t *out_enumerated,
                                 uint64_t *out_species);

/**
 * # Safety
 * `p` must be null or a handle from this library, freed once.
 */
void ocs_poset_free(struct OcsPoset *p);

/**
 * Number of elements; 0 for a null handle.
 *
 * # Safety
 * `p` must be null or a live handle.
 */
size_t ocs_poset_len(const struct OcsPoset *p);

/**
 * `μ(a, b)`.
 *
 * # Safety
 * `p` must be a live handle; `out` writable.
 */
enum OcsStatus ocs_poset_mobius(const struct OcsPoset *p, size_t a, size_t b, int64_t *out);

/**
 * Reduced homology of the order complex as JSON `{"degree": rank}`.
 *
 * # Safety
 * `p` must be a live handle; `out` writable.
 */
enum OcsStatus ocs_poset_homology_json(const struct OcsPoset *p, char **out);

/**
 * Whitney homology as a JSON list of `{rank, degree, dim}`.
 *
 * # Safety
 * `p` must be a live handle; `out` writable.
 */
enum OcsStatus ocs_poset_whitney_json(const struct OcsPoset *p, char **out);

/**
 * Parses a space spec (JSON with `betti`).
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` writable.
 */
enum OcsStatus ocs_space_from_json(const char *json, struct OcsSpace **out);

/**
 * # Safety
 * `s` must be null or a handle from this library, freed once.
 */
void ocs_space_free(struct OcsSpace *s);

/**
 * E¹ dimensions for `n ≤ nmax` as a JSON list of `{n, p, q, dim}`.
 *
 * # Safety
 * `s` must be a live handle; `out` writable.
 */
enum OcsStatus ocs_space_e1_json(const struct OcsSpace *s, size_t nmax, char **out);

/**
 * `χ_c(Confⁿ)` for `n ≤ nmax` as a JSON list of decimal strings.
 *
 * # Safety
 * `s` must be a live handle; `out` writable.
 */
enum OcsStatus ocs_space_euler_json(const struct OcsSpace *s, size_t nmax, char **out);

/**
 * Stability report; `variant` is `left`, `right` or `bottom`.
 *
 * # Safety
 * `s` must be a live handle; `variant` a NUL-terminated string; `out`
 * writable.
 */
enum OcsStatus ocs_space_stability_json(const struct OcsSpace *s,
                                        const char *variant,
                                        size_t steps,
                                        char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OCS_H */
