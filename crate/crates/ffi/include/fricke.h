#ifndef FRICKE_H
#define FRICKE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

#define FRICKE_OK 0

/**
 * bad argument or malformed input
 */
#define FRICKE_ERR_INPUT 2

/**
 * numerical or rounding failure
 */
#define FRICKE_ERR_NUMERICAL 3

/**
 * degenerate mathematical case
 */
#define FRICKE_ERR_DEGENERATE 4

#define FRICKE_ERR_NULL 5

#define FRICKE_ERR_PANIC 6

/**
 * output buffer too small; the needed length is still reported
 */
#define FRICKE_ERR_BUFFER 7

#define FRICKE_METHOD_SERIES 0

#define FRICKE_METHOD_FLOAT 1

#define FRICKE_METHOD_VOLCANO 2

/**
 * Opaque polynomial handle.
 */
typedef struct FrickePoly FrickePoly;

/**
 * One isogenous curve; `status` is nonzero when this root was degenerate.
 */
typedef struct FrickeIsogeny {
  uint64_t kappa;
  uint64_t a_star;
  uint64_t b_star;
  uint64_t kappa1;
  int32_t status;
} FrickeIsogeny;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or NULL. Owned by the library.
 */
const char *fricke_last_error(void);

/**
 * Compute U, V, W, A or B for prime `ell` with the given method.
 *
 * # Safety
 * `family` must be a NUL-terminated string; `out` must be writable.
 */
int32_t fricke_poly_compute(uint64_t ell,
                            const char *family,
                            uint32_t method,
                            uint64_t seed,
                            struct FrickePoly **out);

/**
 * Parse a polynomial from the JSON file format.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
int32_t fricke_poly_from_json(const char *json, struct FrickePoly **out);

/**
 * Reduce the coefficients modulo a prime into a new handle.
 *
 * # Safety
 * `poly` must be a live handle or NULL; `out` must be writable.
 */
int32_t fricke_poly_reduce_mod(const struct FrickePoly *poly, uint64_t p, struct FrickePoly **out);

/**
 * # Safety
 * `poly` must come from this library and not be used afterwards.
 */
void fricke_poly_free(struct FrickePoly *poly);

/**
 * Level, or 0 for NULL.
 *
 * # Safety
 * `poly` must be a live handle or NULL.
 */
uint64_t fricke_poly_ell(const struct FrickePoly *poly);

/**
 * Number of nonzero terms, or 0 for NULL.
 *
 * # Safety
 * `poly` must be a live handle or NULL.
 */
uintptr_t fricke_poly_num_terms(const struct FrickePoly *poly);

/**
 * Modulus, or 0 for integer coefficients or NULL.
 *
 * # Safety
 * `poly` must be a live handle or NULL.
 */
uint64_t fricke_poly_modulus(const struct FrickePoly *poly);

/**
 * Relative height in the (X, A, B) form.
 *
 * # Safety
 * `poly` must be a live handle or NULL; `out` must be writable.
 */
int32_t fricke_poly_relative_height(const struct FrickePoly *poly, double *out);

/**
 * JSON text of the polynomial; release with `fricke_string_free`.
 *
 * # Safety
 * `poly` must be a live handle or NULL; `out` must be writable.
 */
int32_t fricke_poly_to_json(const struct FrickePoly *poly, char **out);

/**
 * Human-readable polynomial in X, E4, E6, D; release with `fricke_string_free`.
 *
 * # Safety
 * `poly` must be a live handle or NULL; `out` must be writable.
 */
int32_t fricke_poly_to_text(const struct FrickePoly *poly, char **out);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void fricke_string_free(char *s);

/**
 * Isogenous curves of `y^2 = x^3 + a x + b` over F_p from the roots of `u`.
 * Writes at most `cap` rows and always sets `*count` to the number of roots;
 * returns `FRICKE_ERR_BUFFER` when `cap` is too small.
 *
 * # Safety
 * `u` must be a live handle; `rows` must hold `cap` entries (may be NULL when
 * `cap` is 0); `count` must be writable.
 */
int32_t fricke_isogenous(const struct FrickePoly *u,
                         uint64_t p,
                         uint64_t a,
                         uint64_t b,
                         struct FrickeIsogeny *rows,
                         uintptr_t cap,
                         uintptr_t *count);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRICKE_H */
