#ifndef JETLIE_H
#define JETLIE_H

/* Generated by cbindgen from the jetlie-ffi crate; keep in sync with src/lib.rs. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes mirroring the CLI exit codes.
 */
typedef enum jetlie_status {
  JETLIE_STATUS_OK = 0,
  JETLIE_STATUS_VERIFY_FAILED = 1,
  JETLIE_STATUS_USAGE = 2,
  JETLIE_STATUS_PARSE_ERROR = 3,
  JETLIE_STATUS_ENGINE_ERROR = 4,
} jetlie_status;

typedef struct jetlie_engine jetlie_engine;

typedef struct jetlie_expr jetlie_expr;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Version of the underlying engine crate.
 */
const char *jetlie_version(void);

/**
 * Creates an engine with the embedded catalog loaded. Returns null only if
 * the embedded data fails to parse, which would be a packaging defect.
 */
jetlie_engine *jetlie_engine_new(void);

/**
 * # Safety
 * `engine` must come from `jetlie_engine_new` and not be used afterwards.
 */
void jetlie_engine_free(jetlie_engine *engine);

/**
 * Message describing the most recent failure on this engine, or null.
 * The pointer stays valid until the next failing call.
 *
 * # Safety
 * `engine` must be a live engine handle.
 */
const char *jetlie_last_error(const jetlie_engine *engine);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must have been returned through an out-parameter of this library.
 */
void jetlie_string_free(char *s);

/**
 * Parses an expression in the engine grammar into a new handle.
 *
 * # Safety
 * `engine` must be live; `text` must be a NUL-terminated UTF-8 string;
 * `out` must be a valid pointer.
 */
jetlie_status jetlie_expr_parse(jetlie_engine *engine,
                                const char *text,
                                jetlie_expr **out);

/**
 * # Safety
 * `expr` must come from this library and not be used afterwards.
 */
void jetlie_expr_free(jetlie_expr *expr);

/**
 * Canonical text form of an expression.
 *
 * # Safety
 * All handles must be live; `out` must be a valid pointer.
 */
jetlie_status jetlie_expr_print(jetlie_engine *engine,
                                const jetlie_expr *expr,
                                char **out);

/**
 * Partial derivative with respect to a variable named in the engine grammar
 * (`x`, `y`, `y'`, `y^(k)`, or a parameter name).
 *
 * # Safety
 * All handles must be live; `var` must be NUL-terminated UTF-8; `out` must
 * be a valid pointer.
 */
jetlie_status jetlie_expr_diff(jetlie_engine *engine,
                               const jetlie_expr *expr,
                               const char *var,
                               jetlie_expr **out);

/**
 * Randomized zero test at the given seed; writes 1 into `out` when the
 * expression vanishes identically under the default policy.
 *
 * # Safety
 * All handles must be live; `out` must be a valid pointer.
 */
jetlie_status jetlie_expr_is_zero(jetlie_engine *engine,
                                  const jetlie_expr *expr,
                                  uint64_t seed,
                                  int32_t *out);

/**
 * Runs the full verification pipeline for one catalog entry and returns the
 * JSON report lines. `params` is an optional comma-separated list of
 * `name=p/q` bindings (may be null). Returns `VerifyFailed` when a check
 * fails; the JSON is still written in that case.
 *
 * # Safety
 * `engine` must be live; `label` NUL-terminated UTF-8; `params` null or
 * NUL-terminated UTF-8; `out_json` a valid pointer.
 */
jetlie_status jetlie_check_entry(jetlie_engine *engine,
                                 const char *label,
                                 const char *params,
                                 uint64_t seed,
                                 char **out_json);

/**
 * Number of catalog entries (rows plus variants).
 *
 * # Safety
 * `engine` must be a live engine handle.
 */
size_t jetlie_catalog_len(const jetlie_engine *engine);

/**
 * The label of the idx-th catalog entry, or null when out of range.
 *
 * # Safety
 * `engine` must be live; `out` must be a valid pointer.
 */
jetlie_status jetlie_catalog_label(const jetlie_engine *engine,
                                   size_t idx,
                                   char **out);

#ifdef __cplusplus
}  // extern "C"
#endif // __cplusplus

#endif  /* JETLIE_H */
