/* Minimal consumer of the gch2 C ABI.
 *
 * Build (from the workspace root, after `cargo build --release -p gch2-ffi`):
 *
 *   cc crates/ffi/examples/smoke.c -Icrates/ffi/include \
 *      -Ltarget/release -lgch2_ffi -lm -lpthread -ldl -o gch2_smoke
 *   LD_LIBRARY_PATH=target/release ./gch2_smoke
 */
#include "gch2.h"

#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static void check(Gch2Status status, const char *what) {
  if (status != GCH2_STATUS_OK) {
    fprintf(stderr, "%s failed with status %d\n", what, (int)status);
    exit(1);
  }
}

int main(void) {
  printf("gch2 %s\n", gch2_version());

  Gch2Grid *grid = NULL;
  check(gch2_grid_new(256, &grid), "grid_new");

  Gch2Field *wave = NULL;
  check(gch2_field_harmonic(grid, 4, 0.0, &wave), "harmonic");

  double norm = 0.0;
  check(gch2_sobolev_norm(wave, 2.0, &norm), "sobolev_norm");
  printf("||cos(4x)||_{H^2} = %.12f (expect 17 sqrt(pi) = 30.131715...)\n", norm);

  double r, j, beta, alpha;
  check(gch2_predicted_exponents(1, 1, 2.0, 2.0, 3.0, 0.5, &r, &j, &beta, &alpha),
        "predicted_exponents");
  printf("exponents: r=%g j=%g beta=%g alpha=%g\n", r, j, beta, alpha);

  uint32_t ns[2] = {16, 32};
  char *json = NULL;
  check(gch2_residual_scan_json(1, 1, 2.0, 2.0, 3.0, 1.75, ns, 2, &json),
        "residual_scan_json");
  printf("residual scan report: %zu bytes of JSON\n", (size_t)strlen(json));
  gch2_string_free(json);

  gch2_field_free(wave);
  gch2_grid_free(grid);
  printf("ok\n");
  return 0;
}
