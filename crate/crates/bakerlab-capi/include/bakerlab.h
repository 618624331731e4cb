/* C ABI for the bakerlab quantum baker's map engine. */

#ifndef BAKERLAB_H
#define BAKERLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum {
  BK_STATUS_OK = 0,
  BK_STATUS_INVALID_ARGUMENT = 1,
  BK_STATUS_NULL_POINTER = 2,
  BK_STATUS_BUFFER_TOO_SMALL = 3,
  BK_STATUS_INTERNAL_ERROR = 4,
} BkStatus;

/**
 * Opaque scan result handle; free with [`bk_scan_free`].
 */
typedef struct BkScan BkScan;

/**
 * One complex matrix entry.
 */
typedef struct {
  double re;
  double im;
} BkComplex;

/**
 * One (N, θ, m) scan probe. θ components are reduced fractions.
 */
typedef struct {
  uint32_t n;
  uint32_t m;
  int64_t theta1_num;
  int64_t theta1_den;
  int64_t theta2_num;
  int64_t theta2_den;
  double rx;
  double ry;
  bool invariant;
} BkScanRecord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Version string of the underlying crate (static storage).
 */
const char *bk_version(void);

/**
 * Fill `out` (row-major, length `len >= n*n`) with the N×N propagator
 * matrix on the periodic fiber. N must be even.
 *
 * # Safety
 * `out` must point to at least `len` writable `BkComplex` entries.
 */
BkStatus bk_matrix_f(uint32_t n, BkComplex *out, uintptr_t len);

/**
 * Max-norm deviation of `M†M` from the identity for the N×N matrix.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
BkStatus bk_matrix_unitarity_deviation(uint32_t n, double *out);

/**
 * Cross-validate the matrix form against the comb pipeline: writes the max
 * entry deviation after the global-phase fit and the fitted phase.
 *
 * # Safety
 * `out_dev` and `out_phase` must be valid pointers.
 */
BkStatus bk_matrix_vs_comb(uint32_t n, double *out_dev, double *out_phase);

/**
 * Run the invariance scan over N ∈ [n_min, n_max] and the θ grid of
 * denominator ≤ `theta_denom`. On success `*out` owns the result.
 *
 * # Safety
 * `out` must be a valid pointer; the handle must be released with
 * [`bk_scan_free`].
 */
BkStatus bk_scan_new(uint32_t n_min, uint32_t n_max, int64_t theta_denom, double tol, BkScan **out);

/**
 * Release a scan handle. A null pointer is a no-op.
 *
 * # Safety
 * `scan` must be a pointer returned by [`bk_scan_new`], not yet freed.
 */
void bk_scan_free(BkScan *scan);

/**
 * Number of records in a scan.
 *
 * # Safety
 * `scan` must be a live handle from [`bk_scan_new`].
 */
uintptr_t bk_scan_len(const BkScan *scan);

/**
 * Copy record `index` into `*out`.
 *
 * # Safety
 * `scan` must be a live handle and `out` a valid pointer.
 */
BkStatus bk_scan_record(const BkScan *scan, uintptr_t index, BkScanRecord *out);

/**
 * Whether the scanned invariant set is exactly {(N,(0,0)) : N even}.
 *
 * # Safety
 * `scan` must be a live handle and `out_pass` a valid pointer.
 */
BkStatus bk_scan_verdict(const BkScan *scan, bool *out_pass);

/**
 * Residuals of a single (N, θ) point: max over the basis index m.
 *
 * # Safety
 * The three output pointers must be valid.
 */
BkStatus bk_scan_point(uint32_t n,
                       int64_t theta1_num,
                       int64_t theta1_den,
                       int64_t theta2_num,
                       int64_t theta2_den,
                       double tol,
                       double *out_max_rx,
                       double *out_max_ry,
                       bool *out_invariant);

/**
 * Escape fraction of the n = 0 momentum-center family over k ∈ [k_min, k_max].
 *
 * # Safety
 * `out_fraction` must be a valid pointer.
 */
BkStatus bk_escape_fraction(uint32_t n,
                            int64_t theta2_num,
                            int64_t theta2_den,
                            int64_t k_min,
                            int64_t k_max,
                            double *out_fraction);

/**
 * One step of the exact covering map. Writes x'_num, x'_den, p'_num, p'_den
 * into `out` (length ≥ 4).
 *
 * # Safety
 * `out` must point to at least 4 writable i64 values.
 */
BkStatus bk_cover_map(int64_t x_num, int64_t x_den, int64_t p_num, int64_t p_den, int64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BAKERLAB_H */
