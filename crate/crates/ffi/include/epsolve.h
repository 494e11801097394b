#ifndef EPSOLVE_H
#define EPSOLVE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>

/*
 Result code of every fallible call.
 */
typedef enum EpStatus {
  EP_STATUS_OK = 0,
  EP_STATUS_NULL_ARGUMENT = 1,
  EP_STATUS_INVALID_UTF8 = 2,
  EP_STATUS_JSON = 3,
  EP_STATUS_SYNTAX = 4,
  /*
   Input parsed but violates an invariant (order axioms, pair laws, ...).
   */
  EP_STATUS_INVALID = 5,
  EP_STATUS_CAP_EXCEEDED = 6,
  EP_STATUS_INTERNAL = 7,
  EP_STATUS_PANIC = 8,
} EpStatus;

/*
 Opaque cocone over an ω-chain of ep- or adjoint pairs.
 */
typedef struct EpCocone EpCocone;

/*
 Opaque finite poset.
 */
typedef struct EpPoset EpPoset;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or null. The pointer
 stays valid until the next failing call on the same thread.
 */
const char *ep_last_error(void);

/*
 Library version as a static string.
 */
const char *ep_version(void);

/*
 # Safety
 `s` must be null or a string returned by this library, not yet freed.
 */
void ep_string_free(char *s);

/*
 Parses `{"elems", "leq", "bottom"}`.

 # Safety
 `json` must be a nul-terminated string; `out` must be writable.
 */
enum EpStatus ep_poset_from_json(const char *json, struct EpPoset **out);

/*
 # Safety
 `p` must be null or a handle from [`ep_poset_from_json`], not yet freed.
 */
void ep_poset_free(struct EpPoset *p);

/*
 # Safety
 `p` must be a live handle; `out` must be writable.
 */
enum EpStatus ep_poset_len(const struct EpPoset *p, size_t *out);

/*
 Whether element `i` is below element `j`, by index.

 # Safety
 `p` must be a live handle; `out` must be writable.
 */
enum EpStatus ep_poset_leq(const struct EpPoset *p, size_t i, size_t j, bool *out);

/*
 Isomorphism-invariant code; equal codes mean isomorphic posets.

 # Safety
 `p` must be a live handle; `out` receives a string for [`ep_string_free`].
 */
enum EpStatus ep_poset_canonical_form(const struct EpPoset *p, char **out);

/*
 # Safety
 `p` must be a live handle; `out` receives a string for [`ep_string_free`].
 */
enum EpStatus ep_poset_to_json(const struct EpPoset *p, char **out);

/*
 Parses a cocone document (`posets`, `chain`, `apex`, `legs`).

 # Safety
 `json` must be a nul-terminated string; `out` must be writable.
 */
enum EpStatus ep_cocone_from_json(const char *json, struct EpCocone **out);

/*
 # Safety
 `k` must be null or a handle from [`ep_cocone_from_json`], not yet freed.
 */
void ep_cocone_free(struct EpCocone *k);

/*
 # Safety
 `k` must be a live handle; `out` receives a string for [`ep_string_free`].
 */
enum EpStatus ep_cocone_to_json(const struct EpCocone *k, char **out);

/*
 Local-determination report as JSON: `{"kind", "verdict", "defects", "adj_residuals"}`.

 # Safety
 `k` must be a live handle; `out` receives a string for [`ep_string_free`].
 */
enum EpStatus ep_cocone_check_ld(const struct EpCocone *k, char **out);

/*
 Mediator search under the default caps.

 # Safety
 `k` must be a live handle; `out` must be writable.
 */
enum EpStatus ep_cocone_is_colimiting(const struct EpCocone *k, bool *out);

/*
 Solves `equation` to `depth` and writes the run report as JSON. The
 report's own checks are in `theorem_suite`; `passed` mirrors them.

 # Safety
 `equation` must be a nul-terminated string; `out` receives a string for
 [`ep_string_free`]; `passed` may be null.
 */
enum EpStatus ep_solve(const char *equation, size_t depth, char **out, bool *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EPSOLVE_H */
