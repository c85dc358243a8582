#ifndef REALIGN_H
#define REALIGN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Passed as `uint32_t`; other values are rejected with `InvalidArgument`.
 */
typedef enum RealignLogBase {
  REALIGN_LOG_BASE_TWO = 0,
  REALIGN_LOG_BASE_E = 1,
} RealignLogBase;

typedef enum RealignStatus {
  REALIGN_STATUS_OK = 0,
  REALIGN_STATUS_NULL_POINTER = 1,
  REALIGN_STATUS_INVALID_ARGUMENT = 2,
  REALIGN_STATUS_SHAPE = 3,
  REALIGN_STATUS_NOT_HERMITIAN = 4,
  REALIGN_STATUS_NOT_POSITIVE = 5,
  REALIGN_STATUS_TRACE = 6,
  REALIGN_STATUS_NO_CONVERGENCE = 7,
  REALIGN_STATUS_NUMERICAL = 8,
  REALIGN_STATUS_PARSE = 9,
  REALIGN_STATUS_BUFFER_TOO_SMALL = 10,
  REALIGN_STATUS_PANIC = 11,
} RealignStatus;

typedef enum RealignSubsystem {
  REALIGN_SUBSYSTEM_A = 0,
  REALIGN_SUBSYSTEM_B = 1,
} RealignSubsystem;

/**
 * Opaque handle to a validated bipartite density matrix.
 */
typedef struct RealignState RealignState;

/**
 * Outcome of one criterion. `scalar` is N for realignment and the smallest
 * partial-transpose eigenvalue for PPT; `log_n` is NaN when not applicable.
 */
typedef struct RealignReport {
  bool detected_entangled;
  double scalar;
  double log_n;
} RealignReport;

/**
 * `concurrence` and `e_f` are only meaningful when `has_two_qubit_measures`.
 */
typedef struct RealignMeasures {
  double n;
  double log_n;
  double n_minus_one;
  double f;
  bool has_two_qubit_measures;
  double concurrence;
  double e_f;
} RealignMeasures;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a state from `(m n) x (m n)` row-major real and imaginary parts.
 * `im` may be null for a real matrix. On success `*out` owns a new handle.
 *
 * # Safety
 * `re` (and `im` when non-null) must point to `(m n)^2` doubles; `out` must be writable.
 */
enum RealignStatus realign_state_new(size_t m,
                                     size_t n,
                                     const double *re,
                                     const double *im,
                                     bool normalize_trace,
                                     struct RealignState **out);

/**
 * Builds a catalog state from its textual spec, e.g. `"horodecki3x3 a=0.236"`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string; `out` must be writable.
 */
enum RealignStatus realign_state_from_spec(const char *spec, struct RealignState **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `st` must come from this library and not be used afterwards.
 */
void realign_state_free(struct RealignState *st);

/**
 * # Safety
 * `st` must be a live handle; `m` and `n` must be writable.
 */
enum RealignStatus realign_state_dims(const struct RealignState *st, size_t *m, size_t *n);

/**
 * Trace norm `N` of the realigned matrix.
 *
 * # Safety
 * `st` must be a live handle; `out` must be writable.
 */
enum RealignStatus realign_trace_norm(const struct RealignState *st, double *out);

/**
 * # Safety
 * `st` must be a live handle; `out` must be writable.
 */
enum RealignStatus realign_realignment_test(const struct RealignState *st,
                                            double tol,
                                            uint32_t base,
                                            struct RealignReport *out);

/**
 * Smallest eigenvalue of the partial transpose on `subsystem` (a `RealignSubsystem` value).
 *
 * # Safety
 * `st` must be a live handle; `out` must be writable.
 */
enum RealignStatus realign_ppt_min_eigenvalue(const struct RealignState *st,
                                              uint32_t subsystem,
                                              double *out);

/**
 * # Safety
 * `st` must be a live handle; `out` must be writable.
 */
enum RealignStatus realign_measures(const struct RealignState *st,
                                    double tol,
                                    uint32_t base,
                                    struct RealignMeasures *out);

/**
 * Concurrence of a two-qubit state; `InvalidArgument` for other dimensions.
 *
 * # Safety
 * `st` must be a live handle; `out` must be writable.
 */
enum RealignStatus realign_concurrence(const struct RealignState *st, double *out);

/**
 * Copies the `m^2 x n^2` realigned matrix, row-major, into `re` and `im`
 * (each of capacity `len`). Returns `BufferTooSmall` if `len < m^2 n^2`.
 *
 * # Safety
 * `re` and `im` must each point to `len` writable doubles.
 */
enum RealignStatus realign_realigned_matrix(const struct RealignState *st,
                                            double *re,
                                            double *im,
                                            size_t len);

/**
 * Copies the calling thread's last error message (empty after a success)
 * into `buf`, truncated and NUL-terminated. Returns the full message length
 * plus one, so a caller can size `buf` with a first call on a null buffer.
 *
 * # Safety
 * `buf` must be null or point to `cap` writable bytes.
 */
size_t realign_last_error_message(char *buf, size_t cap);

/**
 * Library version as a static NUL-terminated string.
 */
const char *realign_version(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* REALIGN_H */
