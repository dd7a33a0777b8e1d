/* C interface for the twisted Thue inequality solver. */

#ifndef THUE_H
#define THUE_H

/* Generated by cbindgen from the thue-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result of every call.
 */
typedef enum ThueStatus {
  THUE_STATUS_OK = 0,
  /*
   Invalid input: spec, form, parameter, or a degenerate configuration.
   */
  THUE_STATUS_VALIDATION = 2,
  /*
   Certification failed at the requested precision; retry with more bits.
   */
  THUE_STATUS_PRECISION = 3,
  /*
   A required pointer argument was null.
   */
  THUE_STATUS_NULL_ARGUMENT = 4,
  /*
   A string argument was not valid UTF-8.
   */
  THUE_STATUS_INVALID_UTF8 = 5,
  /*
   An internal invariant failed; the library state is still sound.
   */
  THUE_STATUS_PANIC = 6,
} ThueStatus;

/*
 Field plus everything derived from its spec file, built once.
 */
typedef struct ThueContext ThueContext;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Builds a context from a field spec JSON document. `bits` is the
 working precision (64..=4096; pass 0 for the default 128).

 # Safety
 `spec_json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum ThueStatus thue_context_new(const char *spec_json, uint32_t bits, struct ThueContext **out);

/*
 Releases a context. Null is ignored.

 # Safety
 `ctx` must be null or a pointer from `thue_context_new`, freed once.
 */
void thue_context_free(struct ThueContext *ctx);

/*
 Degree, signature, irreducibility and unit summary as JSON.

 # Safety
 `ctx` from `thue_context_new`; `out_json` a valid pointer.
 */
enum ThueStatus thue_field_check(const struct ThueContext *ctx, char **out_json);

/*
 The composed bound chain for `|F_a(x, y)| <= m`; `m_decimal` is a
 decimal integer string.

 # Safety
 `ctx` from `thue_context_new`; strings NUL-terminated; `out_json` valid.
 */
enum ThueStatus thue_bounds(const struct ThueContext *ctx, const char *m_decimal, char **out_json);

/*
 Capped family enumeration; same JSON shape as the CLI `solve-family`.

 # Safety
 `ctx` from `thue_context_new`; strings NUL-terminated; `out_json` valid.
 */
enum ThueStatus thue_solve_family(const struct ThueContext *ctx,
                                  const char *m_decimal,
                                  int64_t cap_xy,
                                  int64_t cap_a,
                                  char **out_json);

/*
 Solves one totally imaginary form given as `{"coefficients": [...]}`.

 # Safety
 Strings NUL-terminated; `out_json` a valid pointer.
 */
enum ThueStatus thue_solve_fixed(const char *form_json,
                                 const char *m_decimal,
                                 uint32_t bits,
                                 char **out_json);

/*
 Solves the quartic family `|F_n(x, y)| <= m` for `|n| <= cap_n`,
 `|x|, |y| <= cap_xy`.

 # Safety
 Strings NUL-terminated; `out_json` a valid pointer.
 */
enum ThueStatus thue_stender_solve(uint32_t d,
                                   int64_t c,
                                   const char *m_decimal,
                                   int64_t cap_xy,
                                   int64_t cap_n,
                                   uint32_t bits,
                                   char **out_json);

/*
 Coefficients (a, b, c) of quartic family member n, exact decimal
 strings.

 # Safety
 `out_json` must be a valid pointer.
 */
enum ThueStatus thue_stender_coeffs(uint32_t d, int64_t c, int64_t n, char **out_json);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must be null or a pointer this library handed out, freed once.
 */
void thue_string_free(char *s);

/*
 Message for the most recent failure on this thread; empty if none.
 Valid until the next failing call on the same thread.
 */
const char *thue_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* THUE_H */
