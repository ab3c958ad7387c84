#ifndef GCH2_H
#define GCH2_H

/* Generated by cbindgen from gch2-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible entry point.
typedef enum Gch2Status {
  // Success.
  GCH2_STATUS_OK = 0,
  // A pointer was null or a scalar argument out of range.
  GCH2_STATUS_INVALID_ARGUMENT = 1,
  // Two fields live on different grids.
  GCH2_STATUS_GRID_MISMATCH = 2,
  // A requested frequency does not fit the grid.
  GCH2_STATUS_FREQUENCY_TOO_HIGH = 3,
  // The time integration left the validity regime.
  GCH2_STATUS_BLOW_UP = 4,
  // An internal invariant failed (caught panic).
  GCH2_STATUS_INTERNAL = 5,
} Gch2Status;

// Opaque field handle.
typedef struct Gch2Field Gch2Field;

// Opaque periodic grid handle.
typedef struct Gch2Grid Gch2Grid;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static version string of the library (UTF-8, never freed).
const char *gch2_version(void);

// Create a periodic grid with `n` collocation points (even, >= 8).
//
// # Safety
// `out` must point to writable storage for one pointer.
enum Gch2Status gch2_grid_new(size_t n, struct Gch2Grid **out);

// Number of collocation points, or 0 for a null handle.
//
// # Safety
// `grid` must be null or a live handle from [`gch2_grid_new`].
size_t gch2_grid_len(const struct Gch2Grid *grid);

// Release a grid handle. Null is a no-op.
//
// # Safety
// `grid` must have come from [`gch2_grid_new`] and not be freed twice.
void gch2_grid_free(struct Gch2Grid *grid);

// Build a field from `len == N` collocation values.
//
// # Safety
// `values` must point to `len` readable doubles; `out` to one pointer.
enum Gch2Status gch2_field_from_values(const struct Gch2Grid *grid,
                                       const double *values,
                                       size_t len,
                                       struct Gch2Field **out);

// The constant field `f(x) = c`.
//
// # Safety
// `out` must point to writable storage for one pointer.
enum Gch2Status gch2_field_constant(const struct Gch2Grid *grid, double c, struct Gch2Field **out);

// `cos(freq * x - phase)`.
//
// # Safety
// `out` must point to writable storage for one pointer.
enum Gch2Status gch2_field_harmonic(const struct Gch2Grid *grid,
                                    int64_t freq,
                                    double phase,
                                    struct Gch2Field **out);

// Copy the collocation values into a caller buffer of `len == N` doubles.
//
// # Safety
// `out` must point to `len` writable doubles.
enum Gch2Status gch2_field_values(const struct Gch2Field *field, double *out, size_t len);

// Release a field handle. Null is a no-op.
//
// # Safety
// `field` must have come from this library and not be freed twice.
void gch2_field_free(struct Gch2Field *field);

// Spectral derivative of the given order.
//
// # Safety
// `out` must point to writable storage for one pointer.
enum Gch2Status gch2_field_derivative(const struct Gch2Field *field,
                                      uint32_t order,
                                      struct Gch2Field **out);

// Helmholtz inverse `(1 - d_xx)^{-1}`.
//
// # Safety
// `out` must point to writable storage for one pointer.
enum Gch2Status gch2_field_helmholtz_inverse(const struct Gch2Field *field, struct Gch2Field **out);

// Bessel-potential power `(1 - d_xx)^{s/2}`.
//
// # Safety
// `out` must point to writable storage for one pointer.
enum Gch2Status gch2_field_lambda_power(const struct Gch2Field *field,
                                        double s,
                                        struct Gch2Field **out);

// Dealiased collocation product of two fields on one grid.
//
// # Safety
// `out` must point to writable storage for one pointer.
enum Gch2Status gch2_field_product(const struct Gch2Field *f,
                                   const struct Gch2Field *g,
                                   struct Gch2Field **out);

// `||f||_{H^s}`.
//
// # Safety
// `out` must point to one writable double.
enum Gch2Status gch2_sobolev_norm(const struct Gch2Field *field, double s, double *out);

// `||u||_{H^s} + ||v||_{H^s}`.
//
// # Safety
// `out` must point to one writable double.
enum Gch2Status gch2_pair_norm(const struct Gch2Field *u,
                               const struct Gch2Field *v,
                               double s,
                               double *out);

// Predicted exponents `r, j, beta, alpha` for one `(p, q, a, b, s, sigma)`.
//
// # Safety
// The four output pointers must each point to one writable double.
enum Gch2Status gch2_predicted_exponents(uint32_t p,
                                         uint32_t q,
                                         double a,
                                         double b,
                                         double s,
                                         double sigma,
                                         double *out_r,
                                         double *out_j,
                                         double *out_beta,
                                         double *out_alpha);

// `H^sigma` norms of the residual pair `(E, F)` of the family member
// `(omega, n, s)` at time `t`, evaluated on the standard rule grid for `n`.
//
// # Safety
// `out_e` and `out_f` must each point to one writable double.
enum Gch2Status gch2_residual_norms(uint32_t p,
                                    uint32_t q,
                                    double a,
                                    double b,
                                    int omega,
                                    uint32_t n,
                                    double s,
                                    double sigma,
                                    double t,
                                    double *out_e,
                                    double *out_f);

// Least-squares slope of `log(values)` against `log(ns)`.
//
// # Safety
// `ns` and `values` must point to `len` readable doubles; `out` to one
// writable double.
enum Gch2Status gch2_fit_slope(const double *ns, const double *values, size_t len, double *out);

// Run a residual-decay scan and return the JSON report.
//
// # Safety
// `n_list` must point to `n_len` readable u32; `out_json` to one pointer.
// The returned string must be released with [`gch2_string_free`].
enum Gch2Status gch2_residual_scan_json(uint32_t p,
                                        uint32_t q,
                                        double a,
                                        double b,
                                        double s,
                                        double sigma,
                                        const uint32_t *n_list,
                                        size_t n_len,
                                        char **out_json);

// Run the nonuniform-dependence experiment and return the JSON report.
// The branch (`omega = +-1` or `omega in {1, 0}`) is selected from the
// parity of `(p, q)`.
//
// # Safety
// `n_list` must point to `n_len` readable u32; `out_json` to one pointer.
// The returned string must be released with [`gch2_string_free`].
enum Gch2Status gch2_nud_json(uint32_t p,
                              uint32_t q,
                              double a,
                              double b,
                              double s,
                              double sigma,
                              const uint32_t *n_list,
                              size_t n_len,
                              double t_end,
                              double cfl,
                              char **out_json);

// Release a string returned by a `*_json` function. Null is a no-op.
//
// # Safety
// `s` must have come from this library and not be freed twice.
void gch2_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* GCH2_H */
