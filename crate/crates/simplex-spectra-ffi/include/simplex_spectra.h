#ifndef SIMPLEX_SPECTRA_H
#define SIMPLEX_SPECTRA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum SxsStatus {
  SXS_OK = 0,
  SXS_INVALID_ARGUMENT = 1,
  SXS_DEGENERATE = 2,
  SXS_INTERNAL_ERROR = 3,
} SxsStatus;

/**
 * Opaque basin-experiment handle.
 */
typedef struct SxsBasin SxsBasin;

/**
 * Opaque census handle (report with classifications, JSON-serializable).
 */
typedef struct SxsCensus SxsCensus;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds the full eigenpair census for (n, m).
 *
 * # Safety
 * `out` must be a valid, writable pointer.
 */
enum SxsStatus sxs_census_new(uintptr_t n, uintptr_t m, uint64_t seed, struct SxsCensus **out);

/**
 * Number of eigenpairs in the census.
 *
 * # Safety
 * `handle` must come from `sxs_census_new` and not yet be freed.
 */
uintptr_t sxs_census_count(const struct SxsCensus *handle);

/**
 * Theoretical cap on the number of real eigenpairs for the census shape.
 *
 * # Safety
 * `handle` must come from `sxs_census_new` and not yet be freed.
 */
uintptr_t sxs_census_upper_bound(const struct SxsCensus *handle);

/**
 * Eigenvalue of point `index`, or NaN when out of range.
 *
 * # Safety
 * `handle` must come from `sxs_census_new` and not yet be freed.
 */
double sxs_census_lambda(const struct SxsCensus *handle, uintptr_t index);

/**
 * Serializes the census report to a JSON C string (free with
 * `sxs_string_free`). Returns null on failure.
 *
 * # Safety
 * `handle` must come from `sxs_census_new` and not yet be freed.
 */
char *sxs_census_json(const struct SxsCensus *handle);

/**
 * Releases a census handle. Null is a no-op.
 *
 * # Safety
 * `handle` must come from `sxs_census_new` and not be used afterwards.
 */
void sxs_census_free(struct SxsCensus *handle);

/**
 * Runs a seeded basin-of-attraction experiment. Pass a NaN `shift` to
 * use the default shift for (n, m).
 *
 * # Safety
 * `out` must be a valid, writable pointer.
 */
enum SxsStatus sxs_basin_new(uintptr_t n,
                             uintptr_t m,
                             uintptr_t runs,
                             uint64_t seed,
                             double shift,
                             struct SxsBasin **out);

/**
 * Fraction of converged runs whose limit was a frame vector.
 *
 * # Safety
 * `handle` must come from `sxs_basin_new` and not yet be freed.
 */
double sxs_basin_frame_hit_fraction(const struct SxsBasin *handle);

/**
 * Serializes the basin report to a JSON C string (free with
 * `sxs_string_free`). Returns null on failure.
 *
 * # Safety
 * `handle` must come from `sxs_basin_new` and not yet be freed.
 */
char *sxs_basin_json(const struct SxsBasin *handle);

/**
 * Releases a basin handle. Null is a no-op.
 *
 * # Safety
 * `handle` must come from `sxs_basin_new` and not be used afterwards.
 */
void sxs_basin_free(struct SxsBasin *handle);

/**
 * Frees a string returned by the JSON accessors. Null is a no-op.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void sxs_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SIMPLEX_SPECTRA_H */
