#ifndef LEHMER_H
#define LEHMER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LehmerStatus {
  LEHMER_STATUS_OK = 0,
  LEHMER_STATUS_NULL_POINTER = 1,
  LEHMER_STATUS_PARSE = 2,
  LEHMER_STATUS_INVALID_ARGUMENT = 3,
  LEHMER_STATUS_NOT_MONIC = 4,
  LEHMER_STATUS_NOT_MEMBER = 5,
  LEHMER_STATUS_CERTIFICATION = 6,
  LEHMER_STATUS_INTERNAL = 7,
} LehmerStatus;

/**
 * Opaque integer polynomial.
 */
typedef struct LehmerPoly LehmerPoly;

typedef struct LehmerCounts {
  size_t degree;
  size_t inside;
  size_t on_circle;
  size_t outside;
  size_t real_outside;
  size_t real;
} LehmerCounts;

typedef struct LehmerClass {
  bool member;
  size_t s;
  size_t r;
  bool satisfies_l;
} LehmerClass;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses space-separated coefficients, constant term first, into `*out`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a writable pointer.
 */
enum LehmerStatus lehmer_poly_parse(const char *text, struct LehmerPoly **out);

/**
 * Builds a polynomial from `len` coefficients, constant term first. Returns
 * null for a null pointer or an all-zero input.
 *
 * # Safety
 * `coeffs` must point to `len` readable values.
 */
struct LehmerPoly *lehmer_poly_from_coeffs(const int64_t *coeffs, size_t len);

/**
 * # Safety
 * `p` must be null or a handle from this library that has not been freed.
 */
void lehmer_poly_free(struct LehmerPoly *p);

/**
 * Degree of the polynomial, or 0 for a null handle.
 *
 * # Safety
 * `p` must be null or a live handle.
 */
size_t lehmer_poly_degree(const struct LehmerPoly *p);

/**
 * Certified Mahler measure: value and error radius.
 *
 * # Safety
 * `p` must be a live handle; `value` and `radius` writable pointers.
 */
enum LehmerStatus lehmer_mahler(const struct LehmerPoly *p, double *value, double *radius);

/**
 * Whether every root is zero or a root of unity.
 *
 * # Safety
 * `p` must be a live handle and `out` writable.
 */
enum LehmerStatus lehmer_kronecker(const struct LehmerPoly *p, bool *out);

/**
 * Exact root location counts.
 *
 * # Safety
 * `p` must be a live handle and `out` writable.
 */
enum LehmerStatus lehmer_counts(const struct LehmerPoly *p, struct LehmerCounts *out);

/**
 * Membership in a class `P(s, r)`; non-members are reported with
 * `member = false` and the reason in [`lehmer_last_error`].
 *
 * # Safety
 * `p` must be a live handle and `out` writable.
 */
enum LehmerStatus lehmer_classify(const struct LehmerPoly *p, struct LehmerClass *out);

/**
 * Signature `(r1, r2)` of the trace field of a class member.
 *
 * # Safety
 * `p` must be a live handle; `r1` and `r2` writable.
 */
enum LehmerStatus lehmer_signature(const struct LehmerPoly *p, size_t *r1, size_t *r2);

/**
 * JSON report for the power of the diagonal element at level `m` with
 * `n × n` matrices. Free the string with [`lehmer_string_free`].
 *
 * # Safety
 * `p` must be a live handle and `out` writable.
 */
enum LehmerStatus lehmer_construct_json(const struct LehmerPoly *p,
                                        uint64_t m,
                                        size_t n,
                                        char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void lehmer_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next call into the library on the same thread.
 */
const char *lehmer_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LEHMER_H */
