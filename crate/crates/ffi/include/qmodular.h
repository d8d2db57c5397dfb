#ifndef QMODULAR_H
#define QMODULAR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every call.
typedef enum QmStatus {
  QM_STATUS_OK = 0,
  // A required pointer argument was null.
  QM_STATUS_NULL_ARGUMENT = 1,
  // A string argument was not valid UTF-8.
  QM_STATUS_INVALID_UTF8 = 2,
  QM_STATUS_SYNTAX = 3,
  // Unknown level, weight, generator or identity.
  QM_STATUS_DOMAIN = 4,
  // Precision too small for the request.
  QM_STATUS_PRECISION = 5,
  QM_STATUS_NOT_IN_SPAN = 6,
  QM_STATUS_POLE = 7,
  // Series operations that have no answer, such as inverting zero.
  QM_STATUS_ARITHMETIC = 8,
  QM_STATUS_REGISTRY = 9,
  // `qm_verify` ran, and the identity does not hold.
  QM_STATUS_IDENTITY_FAILED = 10,
  // An index past the end of a series.
  QM_STATUS_OUT_OF_RANGE = 11,
  QM_STATUS_INTERNAL = 12,
} QmStatus;

// Opaque handle to a truncated q-series.
typedef struct QmSeries QmSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. Valid until the
// next call into the library on the same thread; do not free.
const char *qm_last_error(void);

// Releases a string returned by the library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void qm_string_free(char *s);

// Expands `expr` to `O(q^prec)` and stores a new handle in `*out`.
//
// # Safety
// `expr` must be a NUL-terminated string and `out` writable.
enum QmStatus qm_expand(const char *expr, int64_t prec, struct QmSeries **out);

// Releases a series handle. Null is ignored.
//
// # Safety
// `s` must come from [`qm_expand`] and not have been freed.
void qm_series_free(struct QmSeries *s);

// Valuation as the fraction `*num / *den`.
//
// # Safety
// `s` must be a live handle; `num` and `den` writable.
enum QmStatus qm_series_valuation(const struct QmSeries *s, int64_t *num, int64_t *den);

// Precision: the series is known modulo `q^(*num / *den)`.
//
// # Safety
// `s` must be a live handle; `num` and `den` writable.
enum QmStatus qm_series_precision(const struct QmSeries *s, int64_t *num, int64_t *den);

// Number of stored coefficients. Coefficient `i` belongs to the exponent
// `valuation + i / grid`, where `grid` comes from [`qm_series_grid`].
//
// # Safety
// `s` must be a live handle; `len` writable.
enum QmStatus qm_series_len(const struct QmSeries *s, size_t *len);

// Denominator of the exponent grid (1 or 2).
//
// # Safety
// `s` must be a live handle; `grid` writable.
enum QmStatus qm_series_grid(const struct QmSeries *s, uint32_t *grid);

// Coefficient `index` as a decimal `"p"` or `"p/q"` string.
//
// # Safety
// `s` must be a live handle; `out` writable.
enum QmStatus qm_series_coefficient(const struct QmSeries *s, size_t index, char **out);

// Text rendering such as `1 + 240q + O(q^2)`.
//
// # Safety
// `s` must be a live handle; `out` writable.
enum QmStatus qm_series_to_string(const struct QmSeries *s, char **out);

// `dim M_weight(Gamma0(level))`.
//
// # Safety
// `out` must be writable.
enum QmStatus qm_dimension(int64_t level, int64_t weight, uint32_t *out);

// Echelon basis as a JSON document. `prec <= 0` selects the dimension.
//
// # Safety
// `out` must be writable.
enum QmStatus qm_basis_json(int64_t level, int64_t weight, int64_t prec, char **out);

// Coordinates of `expr` in the echelon basis, as a JSON array of
// `["p","q"]` pairs. The expression is expanded to `O(q^(d+5))`.
//
// # Safety
// `expr` must be a NUL-terminated string and `out` writable.
enum QmStatus qm_reduce_json(const char *expr, int64_t level, int64_t weight, char **out);

// Checks the built-in identity `name` to `O(q^prec)`; `prec <= 0` uses its
// default. The JSON report is stored in `*report` whenever the check ran,
// and the status is [`QmStatus::IdentityFailed`] if the sides differ.
//
// # Safety
// `name` must be a NUL-terminated string; `report` writable or null.
enum QmStatus qm_verify(const char *name, int64_t prec, char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QMODULAR_H */
