#ifndef QDOMAIN_H
#define QDOMAIN_H

#pragma once

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status codes returned by every fallible entry point.
 */
typedef enum QdStatus {
  QD_STATUS_OK = 0,
  QD_STATUS_NULL_POINTER = 1,
  QD_STATUS_INVALID_UTF8 = 2,
  QD_STATUS_PARSE = 3,
  QD_STATUS_INVALID_INPUT = 4,
  QD_STATUS_OUT_OF_RANGE = 5,
  QD_STATUS_UNSUPPORTED = 6,
  QD_STATUS_BUFFER_TOO_SMALL = 7,
  QD_STATUS_PANIC = 8,
} QdStatus;

/*
 Opaque finite [0,1]-order handle.
 */
typedef struct QdOrder QdOrder;

/*
 Opaque t-norm handle.
 */
typedef struct QdTNorm QdTNorm;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failure on this thread, or null. The pointer stays
 valid until the next call into the library on the same thread.
 */
const char *qd_last_error(void);

/*
 Library version as a static string.
 */
const char *qd_version(void);

/*
 # Safety
 `s` must be null or a string returned by this library.
 */
void qd_string_free(char *s);

/*
 Parses a t-norm from its JSON description.

 # Safety
 `json` must be a valid C string and `out` a valid pointer.
 */
enum QdStatus qd_tnorm_from_json(const char *json, struct QdTNorm **out);

/*
 One of `godel`, `lukasiewicz`, `product`.

 # Safety
 `name` must be a valid C string and `out` a valid pointer.
 */
enum QdStatus qd_tnorm_builtin(const char *name, struct QdTNorm **out);

/*
 # Safety
 `t` must be null or a handle from this library, not yet freed.
 */
void qd_tnorm_free(struct QdTNorm *t);

/*
 # Safety
 `t` must be a live handle and `out` a valid pointer.
 */
enum QdStatus qd_tnorm_conj(const struct QdTNorm *t, double x, double y, double *out);

/*
 # Safety
 `t` must be a live handle and `out` a valid pointer.
 */
enum QdStatus qd_tnorm_residuum(const struct QdTNorm *t, double x, double y, double *out);

/*
 Writes 1 to `out` when the t-norm satisfies condition (S), else 0.

 # Safety
 `t` must be a live handle and `out` a valid pointer.
 */
enum QdStatus qd_tnorm_condition_s(const struct QdTNorm *t, int *out);

/*
 Largest law violation on the grid of pitch `1/grid_n`. A nonzero `exact`
 selects rational arithmetic, which fails with `Unsupported` on product
 pieces.

 # Safety
 `t` must be a live handle and `max_violation` a valid pointer.
 */
enum QdStatus qd_tnorm_check_laws(const struct QdTNorm *t,
                                  size_t grid_n,
                                  int exact,
                                  double *max_violation);

/*
 Classifies injectivity and returns the verdict with its certificate as
 JSON.

 # Safety
 `t` must be a live handle and `out_json` a valid pointer.
 */
enum QdStatus qd_classify_injectivity(const struct QdTNorm *t,
                                      size_t grid_n,
                                      double eps,
                                      char **out_json);

/*
 Replays a certificate produced by [`qd_classify_injectivity`]. Writes 1 to
 `valid` when every recorded quantity is reproduced.

 # Safety
 `json` must be a valid C string and `valid` a valid pointer.
 */
enum QdStatus qd_verify_certificate(const char *json, double eps, int *valid);

/*
 Parses and validates a finite order file.

 # Safety
 `json` must be a valid C string and `out` a valid pointer.
 */
enum QdStatus qd_order_from_json(const char *json, struct QdOrder **out);

/*
 # Safety
 `x` must be null or a handle from this library, not yet freed.
 */
void qd_order_free(struct QdOrder *x);

/*
 # Safety
 `x` must be a live handle and `out` a valid pointer.
 */
enum QdStatus qd_order_len(const struct QdOrder *x, size_t *out);

/*
 # Safety
 `x` must be a live handle and `out` a valid pointer.
 */
enum QdStatus qd_order_hom(const struct QdOrder *x, size_t a, size_t b, double *out);

/*
 Fills `buf` with the way-below table in row-major order. `buf_len` must
 be at least `n * n`.

 # Safety
 `x` must be a live handle and `buf` must point to `buf_len` doubles.
 */
enum QdStatus qd_order_way_below(const struct QdOrder *x, double *buf, size_t buf_len);

/*
 Runs a command line (without the program name) and returns its report
 and exit code as the `qdomain` binary would.

 # Safety
 `argv` must point to `argc` valid C strings; `out_report` and
 `exit_code` must be valid pointers.
 */
enum QdStatus qd_run(const char *const *argv, size_t argc, char **out_report, int *exit_code);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QDOMAIN_H */
