/* Generated by cbindgen from the lrmds-ffi crate; do not edit by hand. */

#ifndef LRMDS_H
#define LRMDS_H

#include <stdint.h>
#include <stddef.h>

/*
 C ABI over the lrmds library.

 Every object crosses the boundary as an opaque pointer created and freed
 by this library. Functions return `LrmdsStatus`; on any failure the
 thread-local error message is readable via `lrmds_last_error`.

 Pointer rules: inputs are borrowed for the duration of the call; outputs
 marked "caller frees" must be released with the matching `_free`
 function.
*/

/**
 * Method selector for `lrmds_run`.
 */
enum LrmdsMethod {
  LRMDS_METHOD_LRMDS = 0,
  LRMDS_METHOD_LRMDS_FAST = 1,
  LRMDS_METHOD_LRMDS1D = 2,
  LRMDS_METHOD_RANDOM = 3,
  LRMDS_METHOD_OMP2D = 4,
  LRMDS_METHOD_SC_ALS = 5,
};
typedef int32_t LrmdsMethod;

/**
 * Status codes shared by every fallible function.
 */
enum LrmdsStatus {
  LRMDS_STATUS_OK = 0,
  LRMDS_STATUS_NULL_POINTER = 1,
  LRMDS_STATUS_INVALID_ARGUMENT = 2,
  LRMDS_STATUS_PARSE_ERROR = 3,
  LRMDS_STATUS_NUMERIC_ERROR = 4,
  LRMDS_STATUS_IO_ERROR = 5,
  LRMDS_STATUS_BUFFER_TOO_SMALL = 6,
  LRMDS_STATUS_INTERNAL_PANIC = 7,
};
typedef int32_t LrmdsStatus;

typedef struct LrmdsDictionary LrmdsDictionary;

typedef struct LrmdsGraph LrmdsGraph;

typedef struct LrmdsMatrix LrmdsMatrix;

typedef struct LrmdsResult LrmdsResult;

/**
 * Plain-old-data run options. `lrmds_run_options_default` fills the same
 * defaults the CLI uses; zero-valued optional fields mean "unset".
 */
typedef struct LrmdsRunOptions {
  LrmdsMethod method;
  /**
   * Atoms added per iteration (joint selection).
   */
  size_t k;
  size_t rank;
  /**
   * Per-side budgets for the 1D and random modes.
   */
  size_t k_left;
  size_t k_right;
  /**
   * Relative residual stop; 0 disables the early stop.
   */
  double residual_tol;
  /**
   * Outer iteration cap; 0 picks ceil((I+J)/atoms-per-iteration).
   */
  size_t max_outer_iters;
  /**
   * Stop once this many atoms are selected; 0 disables the budget.
   */
  size_t atom_budget;
  double coder_tol;
  size_t coder_max_inner_iters;
  /**
   * Screening threshold ratio (sc-als only).
   */
  double ratio;
  /**
   * Greedy pair budget (omp2d only); 0 is invalid for omp2d.
   */
  size_t target_pairs;
  uint64_t seed;
} LrmdsRunOptions;

/**
 * One trace row as plain data.
 */
typedef struct LrmdsTraceRow {
  size_t iteration;
  size_t left_atoms;
  size_t right_atoms;
  double residual_norm;
  double elapsed_s;
} LrmdsTraceRow;

#ifdef __cplusplus
extern "C" {
#endif  /* __cplusplus */

/**
 * Copies the last error message (NUL-terminated, truncated to `cap`).
 * Returns the full message length in bytes, excluding the terminator.
 *
 * `buf` must point to `cap` writable bytes, or be null (length query).
 */
size_t lrmds_last_error(char *buf, size_t cap);

/**
 * Creates a matrix from row-major data (copied). Caller frees. Returns
 * null on invalid input (see `lrmds_last_error`).
 *
 * `data` must point to `rows * cols` doubles.
 */
LrmdsMatrix *lrmds_matrix_create(size_t rows, size_t cols, const double *data);

/**
 * Reads a matrix from the dense CSV layout. Caller frees.
 *
 * `path` must be a NUL-terminated string.
 */
LrmdsMatrix *lrmds_matrix_read_csv(const char *path);

/**
 * Writes a matrix as dense CSV.
 */
LrmdsStatus lrmds_matrix_write_csv(const LrmdsMatrix *m, const char *path);

size_t lrmds_matrix_rows(const LrmdsMatrix *m);

size_t lrmds_matrix_cols(const LrmdsMatrix *m);

/**
 * Copies the row-major entries into `out` (must hold rows*cols doubles).
 */
LrmdsStatus lrmds_matrix_copy_data(const LrmdsMatrix *m, double *out, size_t cap);

void lrmds_matrix_free(LrmdsMatrix *m);

/**
 * Reads an undirected graph in Matrix Market coordinate format. Caller
 * frees.
 */
LrmdsGraph *lrmds_graph_read_mtx(const char *path);

size_t lrmds_graph_node_count(const LrmdsGraph *g);

void lrmds_graph_free(LrmdsGraph *g);

/**
 * Graph Fourier dictionary (Laplacian eigenvectors). Caller frees.
 */
LrmdsDictionary *lrmds_dict_gft(const LrmdsGraph *g);

/**
 * Graph Haar wavelet dictionary. Caller frees.
 */
LrmdsDictionary *lrmds_dict_graph_haar(const LrmdsGraph *g);

/**
 * Ramanujan periodic dictionary. Caller frees.
 */
LrmdsDictionary *lrmds_dict_ramanujan(size_t length, size_t max_period);

/**
 * B-spline dictionary with one block per scale. Caller frees.
 *
 * `basis_per_scale` must point to `scales` counts.
 */
LrmdsDictionary *lrmds_dict_spline(size_t length,
                                   const size_t *basis_per_scale,
                                   size_t scales,
                                   size_t degree);

/**
 * Column-wise concatenation of two dictionaries. Caller frees.
 */
LrmdsDictionary *lrmds_dict_stack(const LrmdsDictionary *a, const LrmdsDictionary *b);

/**
 * Loads a dictionary CSV written by this library (sidecar optional).
 * Caller frees.
 */
LrmdsDictionary *lrmds_dict_load_csv(const char *path);

size_t lrmds_dict_rows(const LrmdsDictionary *d);

size_t lrmds_dict_atom_count(const LrmdsDictionary *d);

void lrmds_dict_free(LrmdsDictionary *d);

/**
 * Fills the default options (method lrmds, k = 5, rank = 3).
 */
void lrmds_run_options_default(LrmdsRunOptions *opts);

/**
 * Runs the selected method and hands back a result handle (caller frees).
 */
LrmdsStatus lrmds_run(const LrmdsMatrix *x,
                      const LrmdsDictionary *psi,
                      const LrmdsDictionary *phi,
                      const LrmdsRunOptions *opts,
                      LrmdsResult **out);

/**
 * RMSE between the input and the final reconstruction.
 */
double lrmds_result_rmse(const LrmdsResult *r);

size_t lrmds_result_left_count(const LrmdsResult *r);

size_t lrmds_result_right_count(const LrmdsResult *r);

/**
 * Copies selected left atom indices; returns how many indices exist.
 *
 * `buf` must hold `cap` entries, or be null for a pure length query.
 */
size_t lrmds_result_selected_left(const LrmdsResult *r, size_t *buf, size_t cap);

/**
 * Copies selected right atom indices; returns how many indices exist.
 *
 * `buf` must hold `cap` entries, or be null for a pure length query.
 */
size_t lrmds_result_selected_right(const LrmdsResult *r, size_t *buf, size_t cap);

/**
 * The final reconstruction as a fresh matrix handle (caller frees).
 */
LrmdsMatrix *lrmds_result_reconstruction(const LrmdsResult *r);

size_t lrmds_result_trace_len(const LrmdsResult *r);

/**
 * Copies trace row `index` into `out`.
 */
LrmdsStatus lrmds_result_trace_row(const LrmdsResult *r, size_t index, LrmdsTraceRow *out);

void lrmds_result_free(LrmdsResult *r);

#ifdef __cplusplus
}  /* extern "C" */
#endif  /* __cplusplus */

#endif  /* LRMDS_H */
