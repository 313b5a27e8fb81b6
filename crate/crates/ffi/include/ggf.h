#ifndef GGF_H
#define GGF_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GgfStatus {
  GGF_STATUS_OK = 0,
  GGF_STATUS_NULL_POINTER = 1,
  GGF_STATUS_INVALID_UTF8 = 2,
  GGF_STATUS_PARSE_ERROR = 3,
  GGF_STATUS_BUDGET_EXHAUSTED = 4,
  GGF_STATUS_SOLVE_ERROR = 5,
  GGF_STATUS_INVALID_ARGUMENT = 6,
  GGF_STATUS_PANIC = 7,
} GgfStatus;

/**
 * A generating function as a sum of simple terms.
 */
typedef struct GgfGf GgfGf;

/**
 * A univariate series truncated at some `q^n`.
 */
typedef struct GgfSeries GgfSeries;

/**
 * A normalized constraint system.
 */
typedef struct GgfSystem GgfSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until
 * the next call into this library on the same thread.
 */
const char *ggf_last_error(void);

/**
 * Parses constraint-file text (`vars:` line, then constraints).
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` must be writable.
 */
enum GgfStatus ggf_system_parse(const char *text, struct GgfSystem **out);

/**
 * Canonical constraint-file text of a system.
 *
 * # Safety
 * `s` must come from `ggf_system_parse`; `out` must be writable.
 */
enum GgfStatus ggf_system_render(const struct GgfSystem *s, char **out);

/**
 * # Safety
 * `s` must come from `ggf_system_parse` and not be used afterwards.
 */
void ggf_system_free(struct GgfSystem *s);

/**
 * Solves a system. A `budget` of 0 uses the default step budget (or
 * `GGF_STEP_BUDGET` when set).
 *
 * # Safety
 * `s` must be a live system handle; `out` must be writable.
 */
enum GgfStatus ggf_solve(const struct GgfSystem *s, uint64_t budget, struct GgfGf **out);

/**
 * Canonical text of a generating function, one term per line.
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum GgfStatus ggf_gf_render(const struct GgfGf *f, char **out);

/**
 * Number of simple terms.
 *
 * # Safety
 * `f` must be a live handle or NULL (which gives 0).
 */
uintptr_t ggf_gf_terms(const struct GgfGf *f);

/**
 * Expands with every variable sent to `q`, up to `q^weight`.
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum GgfStatus ggf_gf_expand(const struct GgfGf *f, uintptr_t weight, struct GgfSeries **out);

/**
 * # Safety
 * `f` must be a live handle and not be used afterwards.
 */
void ggf_gf_free(struct GgfGf *f);

/**
 * Counts solutions of each weight up to `weight` by enumeration.
 *
 * # Safety
 * `s` must be a live system handle; `out` must be writable.
 */
enum GgfStatus ggf_count(const struct GgfSystem *s, uintptr_t weight, struct GgfSeries **out);

/**
 * Series of a named family. Negative `n` or `k` means "not given";
 * `mode` may be NULL for the recurrence.
 *
 * # Safety
 * `name` must be a nul-terminated string, `mode` one or NULL; `out` must
 * be writable.
 */
enum GgfStatus ggf_family(const char *name,
                          int64_t n,
                          int64_t k,
                          uintptr_t weight,
                          const char *mode,
                          struct GgfSeries **out);

/**
 * Number of coefficients (`weight + 1`).
 *
 * # Safety
 * `s` must be a live handle or NULL (which gives 0).
 */
uintptr_t ggf_series_len(const struct GgfSeries *s);

/**
 * Coefficient of `q^i`; `GGF_STATUS_INVALID_ARGUMENT` when `i` is out of
 * range or the value does not fit in 64 bits.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum GgfStatus ggf_series_coeff_i64(const struct GgfSeries *s, uintptr_t i, int64_t *out);

/**
 * Coefficient of `q^i` in decimal.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum GgfStatus ggf_series_coeff_string(const struct GgfSeries *s, uintptr_t i, char **out);

/**
 * # Safety
 * `s` must be a live handle and not be used afterwards.
 */
void ggf_series_free(struct GgfSeries *s);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void ggf_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GGF_H */
