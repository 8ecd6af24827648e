#ifndef GMK_H
#define GMK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Largest iteration count accepted by the iterate calls.
#define GMK_MAX_ITERATES 64

// Result code of every fallible call.
typedef enum GmkStatus {
  GMK_STATUS_OK = 0,
  GMK_STATUS_NULL_POINTER = 1,
  GMK_STATUS_INVALID_PARAMETERS = 2,
  GMK_STATUS_PARSE = 3,
  GMK_STATUS_CHECK_FAILED = 4,
  GMK_STATUS_INTERNAL = 5,
} GmkStatus;

// The coordinate action of `G_{m,m}` on bit strings of length `2m+1`.
typedef struct GmkAction GmkAction;

// The monodromy automorphism of `G_{m,k}` (or its inverse) on `A1..Am B1..Bk`.
typedef struct GmkPhi GmkPhi;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null after a success.
// The pointer stays valid until the next call on this thread.
const char *gmk_last_error_message(void);

// Release a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a pointer obtained from this library and not yet freed.
void gmk_string_free(char *s);

// Create the monodromy (`inverse == false`) or its inverse.
//
// # Safety
// `out` must be a valid pointer to writable storage.
enum GmkStatus gmk_phi_new(uint32_t m, uint32_t k, bool inverse, struct GmkPhi **out);

// Release a handle from [`gmk_phi_new`]. Null is ignored.
//
// # Safety
// `phi` must be null or a live handle.
void gmk_phi_free(struct GmkPhi *phi);

// Number of free generators, `m + k`. Returns 0 for null.
//
// # Safety
// `phi` must be null or a live handle.
size_t gmk_phi_rank(const struct GmkPhi *phi);

// Length of the reduced word `phi^n(x)` for the generator with 0-based index `generator`.
//
// # Safety
// `phi` must be a live handle and `out` valid for writing.
enum GmkStatus gmk_phi_iterate_length(const struct GmkPhi *phi,
                                      size_t generator,
                                      uint32_t n,
                                      uint64_t *out);

// `phi^n(w)` for a word in textual syntax such as `"A1 B2^-1"`, as a new string.
//
// # Safety
// `phi` must be a live handle, `word` a nul-terminated string and `out` valid for writing.
enum GmkStatus gmk_phi_iterate_word(const struct GmkPhi *phi,
                                    const char *word,
                                    uint32_t n,
                                    char **out);

// The growth table of the monodromy as the JSON document printed by `gmk growth`.
//
// # Safety
// `out` must be valid for writing.
enum GmkStatus gmk_growth_json(uint32_t m, uint32_t k, uint32_t n_max, bool inverse, char **out);

// Build the action for `1 <= m <= 6`.
//
// # Safety
// `out` must be valid for writing.
enum GmkStatus gmk_action_new(uint32_t m, struct GmkAction **out);

// Release a handle from [`gmk_action_new`]. Null is ignored.
//
// # Safety
// `action` must be null or a live handle.
void gmk_action_free(struct GmkAction *action);

// Number of points, `2^(2m+1)`. Returns 0 for null.
//
// # Safety
// `action` must be null or a live handle.
size_t gmk_action_point_count(const struct GmkAction *action);

// Image of `point` (coordinate i is bit i-1) under a word in `a1 .. a(2m+1)`,
// applied left to right.
//
// # Safety
// `action` must be a live handle, `word` a nul-terminated string and `out` valid for writing.
enum GmkStatus gmk_action_apply(const struct GmkAction *action,
                                uint32_t point,
                                const char *word,
                                uint32_t *out);

// Check every property of the action; `*ok` is false if any fails.
//
// # Safety
// `action` must be a live handle and `ok` valid for writing.
enum GmkStatus gmk_action_verify(const struct GmkAction *action, bool *ok);

// Whether a word over `A1..Am B1..Bk s t` is trivial in the double of `G_{m,k}`.
//
// # Safety
// `word` must be a nul-terminated string and `out` valid for writing.
enum GmkStatus gmk_bieri_is_trivial(uint32_t m, uint32_t k, const char *word, bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GMK_H */
