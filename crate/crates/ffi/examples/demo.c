/* Minimal C consumer: build a Ramanujan dictionary pair, encode a rank-1
 * signal, print the RMSE and the selected atoms.
 *
 * Build (from the workspace root):
 *   cargo build --release -p lrmds-ffi
 *   cc crates/ffi/examples/demo.c -Icrates/ffi/include \
 *      -Ltarget/release -llrmds_ffi -lm -o demo
 *   LD_LIBRARY_PATH=target/release ./demo
 */
#include "lrmds.h"
#include <stdio.h>
#include <stdlib.h>

int main(void) {
  size_t n = 18, m = 12;
  LrmdsDictionary *psi = lrmds_dict_ramanujan(n, 5);
  LrmdsDictionary *phi = lrmds_dict_ramanujan(m, 4);
  if (!psi || !phi) {
    char msg[256];
    lrmds_last_error(msg, sizeof msg);
    fprintf(stderr, "dictionary build failed: %s\n", msg);
    return 1;
  }

  /* Rank-1 signal on a single atom pair: alternating rows times a
   * 3-periodic profile. */
  double *x = malloc(n * m * sizeof *x);
  for (size_t r = 0; r < n; ++r)
    for (size_t c = 0; c < m; ++c)
      x[r * m + c] = (r % 2 == 0 ? 1.0 : -1.0) * (double)(c % 3);
  LrmdsMatrix *xm = lrmds_matrix_create(n, m, x);
  free(x);

  LrmdsRunOptions opts;
  lrmds_run_options_default(&opts);
  opts.k = 2;
  opts.rank = 2;
  opts.residual_tol = 1e-10;

  LrmdsResult *result = NULL;
  LrmdsStatus status = lrmds_run(xm, psi, phi, &opts, &result);
  if (status != LRMDS_STATUS_OK) {
    char msg[256];
    lrmds_last_error(msg, sizeof msg);
    fprintf(stderr, "run failed (%d): %s\n", (int)status, msg);
    return 1;
  }

  printf("rmse: %.3e\n", lrmds_result_rmse(result));
  size_t n_left = lrmds_result_selected_left(result, NULL, 0);
  size_t *left = malloc(n_left * sizeof *left);
  lrmds_result_selected_left(result, left, n_left);
  printf("left atoms:");
  for (size_t i = 0; i < n_left; ++i) printf(" %zu", left[i]);
  printf("\n");
  free(left);

  LrmdsTraceRow row;
  for (size_t i = 0; i < lrmds_result_trace_len(result); ++i) {
    lrmds_result_trace_row(result, i, &row);
    printf("iter %zu: %zu+%zu atoms, residual %.3e\n", row.iteration,
           row.left_atoms, row.right_atoms, row.residual_norm);
  }

  lrmds_result_free(result);
  lrmds_matrix_free(xm);
  lrmds_dict_free(psi);
  lrmds_dict_free(phi);
  return 0;
}
