#ifndef VETGATE_H
#define VETGATE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * The value satisfies the check.
 */
#define VG_OK 0

/**
 * The value violates the check; a message is available.
 */
#define VG_FAIL 1

#define VG_ERR_NULL_POINTER -1

#define VG_ERR_INVALID_UTF8 -2

/**
 * A rule did not parse.
 */
#define VG_ERR_PARSE -3

#define VG_ERR_INVALID_ARGUMENT -4

/**
 * An internal error was caught at the boundary.
 */
#define VG_ERR_PANIC -5

#define VG_TYPE_NULL (1 << 0)

#define VG_TYPE_BOOL (1 << 1)

#define VG_TYPE_INT (1 << 2)

#define VG_TYPE_FLOAT (1 << 3)

#define VG_TYPE_STR (1 << 4)

#define VG_TYPE_FACTOR (1 << 5)

#define VG_TYPE_LIST (1 << 6)

/**
 * A parsed rule.
 */
typedef struct VgRule VgRule;

/**
 * A compiled vector specification.
 */
typedef struct VgSpec VgSpec;

/**
 * A value to be checked.
 */
typedef struct VgValue VgValue;

/**
 * Options for [`vg_spec_new`]. Start from [`vg_spec_options_default`].
 */
typedef struct VgSpecOptions {
  /**
   * Bitwise or of `VG_TYPE_*` flags.
   */
  uint32_t types;
  bool any_missing_ok;
  bool all_missing_ok;
  /**
   * Negative for no constraint.
   */
  int64_t min_len;
  /**
   * Negative for no constraint.
   */
  int64_t max_len;
  /**
   * NaN for unbounded.
   */
  double lower;
  /**
   * NaN for unbounded.
   */
  double upper;
  bool lower_closed;
  bool upper_closed;
  bool integerish;
  double tolerance;
  bool unique;
  /**
   * Regular expression every string element must match, or NULL.
   */
  const char *pattern;
} VgSpecOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *vg_version(void);

/**
 * Message for the last error on this thread, or NULL after a call that
 * succeeded. Valid until the next vetgate call on the same thread.
 */
const char *vg_last_error_message(void);

/**
 * Floating point vector. `missing` may be NULL; a non-zero entry marks the
 * element as missing. NaN elements are missing too.
 *
 * # Safety
 * `data` and a non-NULL `missing` must point to `len` readable elements.
 */
int32_t vg_value_float_new(const double *data,
                           const uint8_t *missing,
                           size_t len,
                           struct VgValue **out);

/**
 * Integer vector; see [`vg_value_float_new`].
 *
 * # Safety
 * As for [`vg_value_float_new`].
 */
int32_t vg_value_int_new(const int64_t *data,
                         const uint8_t *missing,
                         size_t len,
                         struct VgValue **out);

/**
 * Logical vector; non-zero bytes are true.
 *
 * # Safety
 * As for [`vg_value_float_new`].
 */
int32_t vg_value_bool_new(const uint8_t *data,
                          const uint8_t *missing,
                          size_t len,
                          struct VgValue **out);

/**
 * String vector. A NULL element is missing.
 *
 * # Safety
 * `data` must point to `len` pointers, each NULL or a NUL-terminated string.
 */
int32_t vg_value_str_new(const char *const *data, size_t len, struct VgValue **out);

/**
 * The null value.
 *
 * # Safety
 * `out` must be writable.
 */
int32_t vg_value_null_new(struct VgValue **out);

/**
 * # Safety
 * `value` must be NULL or a handle from a `vg_value_*_new` function that
 * has not been freed.
 */
void vg_value_free(struct VgValue *value);

/**
 * Parses a rule. On `VG_ERR_PARSE` the error message includes the position
 * and a caret diagram.
 *
 * # Safety
 * `text` must be NULL or NUL-terminated; `out` must be writable.
 */
int32_t vg_rule_parse(const char *text, struct VgRule **out);

/**
 * Canonical text of a rule, released with [`vg_string_free`].
 *
 * # Safety
 * `rule` must be a live handle; `out` must be writable.
 */
int32_t vg_rule_render(const struct VgRule *rule, char **out);

/**
 * # Safety
 * `rule` must be NULL or a live handle from [`vg_rule_parse`].
 */
void vg_rule_free(struct VgRule *rule);

/**
 * Checks a value against a parsed rule. On `VG_FAIL`, `*message` (if
 * `message` is not NULL) receives the failure text; otherwise NULL.
 *
 * # Safety
 * Handles must be live; `message` must be NULL or writable.
 */
int32_t vg_rule_check(const struct VgValue *value, const struct VgRule *rule, char **message);

/**
 * Parses `rule` and checks `value` against it: `VG_OK`, `VG_FAIL`, or an
 * error code.
 *
 * # Safety
 * `value` must be live; `rule` must be NUL-terminated.
 */
int32_t vg_qtest(const struct VgValue *value, const char *rule);

/**
 * Like [`vg_qtest`], also returning the failure message.
 *
 * # Safety
 * As for [`vg_rule_check`], with `rule` NUL-terminated.
 */
int32_t vg_qcheck(const struct VgValue *value, const char *rule, char **message);

/**
 * Like [`vg_qcheck`], but the message is the assertion error naming `label`.
 *
 * # Safety
 * As for [`vg_qcheck`], with `label` NUL-terminated.
 */
int32_t vg_qassert(const struct VgValue *value,
                   const char *rule,
                   const char *label,
                   char **message);

/**
 * Defaults: any type, missing values allowed, no length, bounds, pattern
 * or uniqueness constraint.
 */
struct VgSpecOptions vg_spec_options_default(void);

/**
 * Compiles a vector specification.
 *
 * # Safety
 * `options` must be readable; its `pattern` NULL or NUL-terminated; `out`
 * writable.
 */
int32_t vg_spec_new(const struct VgSpecOptions *options, struct VgSpec **out);

/**
 * # Safety
 * `spec` must be NULL or a live handle from [`vg_spec_new`].
 */
void vg_spec_free(struct VgSpec *spec);

/**
 * Checks a value against a specification; see [`vg_rule_check`].
 *
 * # Safety
 * Handles must be live; `message` must be NULL or writable.
 */
int32_t vg_check_vector(const struct VgValue *value, const struct VgSpec *spec, char **message);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be NULL or a string returned through an out-parameter of this
 * library that has not been freed.
 */
void vg_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VETGATE_H */
