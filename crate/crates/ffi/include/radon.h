#ifndef RADON_H
#define RADON_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result of a fallible call.
typedef enum RadonStatus {
  RADON_STATUS_OK = 0,
  RADON_STATUS_NULL_ARGUMENT = 1,
  RADON_STATUS_INVALID_UTF8 = 2,
  RADON_STATUS_PARSE = 3,
  RADON_STATUS_INVALID_INPUT = 4,
  RADON_STATUS_INSUFFICIENT_SAMPLES = 5,
  RADON_STATUS_NUMERIC = 6,
  RADON_STATUS_IO = 7,
  RADON_STATUS_BUFFER_TOO_SMALL = 8,
  RADON_STATUS_PANIC = 9,
} RadonStatus;

typedef enum RadonTransform {
  RADON_TRANSFORM_RADON = 0,
  RADON_TRANSFORM_XRAY = 1,
} RadonTransform;

// A convex body together with the spec it was built from.
typedef struct RadonBody RadonBody;

typedef struct RadonFunction RadonFunction;

typedef struct RadonReport RadonReport;

typedef struct RadonSinogram RadonSinogram;

// Sampling grid for [`radon_sinogram_generate`]. Zero node counts select the defaults.
typedef struct RadonGrid {
  size_t directions;
  size_t offsets;
  size_t nodes;
  size_t angular_nodes;
  uint64_t seed;
  // When false the direction grid is the deterministic unshifted one.
  bool use_seed;
  enum RadonTransform transform;
} RadonGrid;

typedef struct RadonTolerances {
  double k_spread;
  double linearity;
  double center;
  double width;
  double collapse;
  double collapse_floor;
} RadonTolerances;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static nul-terminated string.
const char *radon_version(void);

// Message for the most recent failure on this thread, or null. The pointer is
// valid until the next failing call on the same thread.
const char *radon_last_error(void);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void radon_string_free(char *s);

// # Safety
// `json` must be a nul-terminated string and `out` writable.
enum RadonStatus radon_body_from_json(const char *json, struct RadonBody **out);

// # Safety
// `body` must be null or a handle from [`radon_body_from_json`], not yet freed.
void radon_body_free(struct RadonBody *body);

// Ambient dimension, or 0 for a null handle.
//
// # Safety
// `body` must be null or a live handle.
size_t radon_body_dimension(const struct RadonBody *body);

// Support function h(ω); `omega` holds `dim` components and is normalized.
//
// # Safety
// `omega` must point to `dim` doubles and `out` be writable.
enum RadonStatus radon_body_support(const struct RadonBody *body,
                                    const double *omega,
                                    size_t dim,
                                    double *out);

// Width h(ω) + h(−ω).
//
// # Safety
// As for [`radon_body_support`].
enum RadonStatus radon_body_width(const struct RadonBody *body,
                                  const double *omega,
                                  size_t dim,
                                  double *out);

// Parses a function spec: JSON or one of `constant-xray`, `indicator`,
// `synthetic-g`, `gamma:<value>`.
//
// # Safety
// `spec` must be a nul-terminated string and `out` writable.
enum RadonStatus radon_function_parse(const char *spec, struct RadonFunction **out);

// # Safety
// `f` must be null or a handle from [`radon_function_parse`], not yet freed.
void radon_function_free(struct RadonFunction *f);

struct RadonGrid radon_grid_default(void);

// Samples the transform of `function` on `body`. A null `grid` uses [`radon_grid_default`].
//
// # Safety
// Handles must be live; `grid` null or readable; `out` writable.
enum RadonStatus radon_sinogram_generate(const struct RadonBody *body,
                                         const struct RadonFunction *function,
                                         const struct RadonGrid *grid,
                                         struct RadonSinogram **out);

// Reads a CSV sinogram and its JSON sidecar, if present.
//
// # Safety
// `path` must be a nul-terminated string and `out` writable.
enum RadonStatus radon_sinogram_load(const char *path, struct RadonSinogram **out);

// Writes the CSV and its sidecar next to it.
//
// # Safety
// `sino` must be live and `path` a nul-terminated string.
enum RadonStatus radon_sinogram_save(const struct RadonSinogram *sino, const char *path);

// # Safety
// `sino` must be null or a live handle, not yet freed.
void radon_sinogram_free(struct RadonSinogram *sino);

// # Safety
// `sino` must be null or a live handle.
size_t radon_sinogram_dimension(const struct RadonSinogram *sino);

// # Safety
// `sino` must be null or a live handle.
size_t radon_sinogram_direction_count(const struct RadonSinogram *sino);

// Total number of (direction, offset) samples.
//
// # Safety
// `sino` must be null or a live handle.
size_t radon_sinogram_sample_count(const struct RadonSinogram *sino);

// Copies the samples in file order. `omegas` receives `dimension` doubles per
// sample; any of the three buffers may be null. `capacity` counts samples.
//
// # Safety
// Non-null buffers must hold `capacity` samples.
enum RadonStatus radon_sinogram_samples(const struct RadonSinogram *sino,
                                        double *omegas,
                                        double *offsets,
                                        double *values,
                                        size_t capacity);

// Moment report as JSON; free the string with [`radon_string_free`].
//
// # Safety
// `sino` must be live and `out` writable.
enum RadonStatus radon_moments_json(const struct RadonSinogram *sino, char **out);

struct RadonTolerances radon_tolerances_default(void);

// Runs the rigidity analysis. Null `tol` means the defaults; `bins` 0 means 64.
//
// # Safety
// `sino` must be live, `tol` null or readable, `out` writable.
enum RadonStatus radon_rigidity(const struct RadonSinogram *sino,
                                const struct RadonTolerances *tol,
                                size_t bins,
                                struct RadonReport **out);

// # Safety
// `report` must be null or a live handle, not yet freed.
void radon_report_free(struct RadonReport *report);

// False for a null handle.
//
// # Safety
// `report` must be null or a live handle.
bool radon_report_is_ball(const struct RadonReport *report);

// Estimated center (`dim` doubles) and radius.
//
// # Safety
// `center` must hold `dim` doubles; `radius` must be writable.
enum RadonStatus radon_report_estimates(const struct RadonReport *report,
                                        double *center,
                                        size_t dim,
                                        double *radius);

// Name of the first failing check, or null for a ball. Free with [`radon_string_free`].
//
// # Safety
// `report` must be null or a live handle.
char *radon_report_obstruction(const struct RadonReport *report);

// Full report as JSON, identical to the CLI output.
//
// # Safety
// `report` must be live and `out` writable.
enum RadonStatus radon_report_json(const struct RadonReport *report, char **out);

// Closed-form Radon transform of the γ-family on the ball of `radius` in
// dimension `dim`, at distance `d` from the center.
//
// # Safety
// `out` must be writable.
enum RadonStatus radon_gamma_closed_form(size_t dim,
                                         double gamma,
                                         double radius,
                                         double d,
                                         double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RADON_H */
