#ifndef CQNC_H
#define CQNC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CqncStatus {
  CQNC_STATUS_OK = 0,
  CQNC_STATUS_NULL_POINTER = 1,
  CQNC_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed or inconsistent configuration, or an unknown preset.
   */
  CQNC_STATUS_CONFIG = 3,
  /**
   * The model could not be evaluated (singular system, lost signal, ...).
   */
  CQNC_STATUS_NUMERIC = 4,
  CQNC_STATUS_OUT_OF_RANGE = 5,
  /**
   * A Rust panic was caught at the boundary.
   */
  CQNC_STATUS_INTERNAL = 6,
} CqncStatus;

/**
 * Opaque validated scenario.
 */
typedef struct CqncScenario CqncScenario;

/**
 * Opaque sweep result.
 */
typedef struct CqncSweep CqncSweep;

/**
 * One row of a sweep. `g_opt` is NaN when the couplings were fixed.
 */
typedef struct CqncRow {
  double omega_over_omega_m;
  double s_f;
  double s_sql;
  double s_cqnc;
  double ratio;
  double g_opt;
} CqncRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null if none failed.
 * Valid until the next failing call on the same thread.
 */
const char *cqnc_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *cqnc_version(void);

/**
 * Parses and validates a JSON scenario.
 *
 * # Safety
 * `json` must be null or a NUL-terminated string; `out` must be null or
 * writable.
 */
enum CqncStatus cqnc_scenario_from_json(const char *json, struct CqncScenario **out);

/**
 * Number of curves in a named figure preset.
 *
 * # Safety
 * `name` must be null or a NUL-terminated string; `out_len` must be null or
 * writable.
 */
enum CqncStatus cqnc_preset_len(const char *name, size_t *out_len);

/**
 * Scenario number `index` of a named figure preset.
 *
 * # Safety
 * As for [`cqnc_preset_len`].
 */
enum CqncStatus cqnc_scenario_from_preset(const char *name,
                                          size_t index,
                                          struct CqncScenario **out);

/**
 * # Safety
 * `scenario` must be null or a handle not yet freed.
 */
void cqnc_scenario_free(struct CqncScenario *scenario);

/**
 * Writes the scenario label as a new string, to be released with
 * [`cqnc_string_free`].
 *
 * # Safety
 * `scenario` must be a live handle; `out` must be null or writable.
 */
enum CqncStatus cqnc_scenario_label(const struct CqncScenario *scenario, char **out);

/**
 * Quantum limits at `omega_over_omega_m`, in units of `ħ m γ_m ω_m`.
 *
 * # Safety
 * `scenario` must be a live handle; out-pointers must be null or writable.
 */
enum CqncStatus cqnc_scenario_limits(const struct CqncScenario *scenario,
                                     double omega_over_omega_m,
                                     double *out_sql,
                                     double *out_cqnc);

/**
 * Dimensionless added force noise at `omega_over_omega_m` with the
 * configured couplings.
 *
 * # Safety
 * `scenario` must be a live handle; `out` must be null or writable.
 */
enum CqncStatus cqnc_scenario_added_noise(const struct CqncScenario *scenario,
                                          double omega_over_omega_m,
                                          double *out);

/**
 * Minimum added noise over the measurement strength at `omega_over_omega_m`.
 * `out_g_opt` receives the optimal strength in units of `ω_m`.
 *
 * # Safety
 * `scenario` must be a live handle; out-pointers must be null or writable.
 */
enum CqncStatus cqnc_scenario_optimize(const struct CqncScenario *scenario,
                                       double omega_over_omega_m,
                                       double *out_s_min,
                                       double *out_g_opt);

/**
 * Evaluates the scenario over its grid.
 *
 * # Safety
 * `scenario` must be a live handle; `out` must be null or writable.
 */
enum CqncStatus cqnc_sweep_run(const struct CqncScenario *scenario, struct CqncSweep **out);

/**
 * Number of rows, or 0 for a null handle.
 *
 * # Safety
 * `sweep` must be null or a live handle.
 */
size_t cqnc_sweep_len(const struct CqncSweep *sweep);

/**
 * # Safety
 * `sweep` must be a live handle; `out` must be null or writable.
 */
enum CqncStatus cqnc_sweep_row(const struct CqncSweep *sweep, size_t index, struct CqncRow *out);

/**
 * Renders the sweep as CSV into a new string, to be released with
 * [`cqnc_string_free`].
 *
 * # Safety
 * `sweep` must be a live handle; `out` must be null or writable.
 */
enum CqncStatus cqnc_sweep_to_csv(const struct CqncSweep *sweep, char **out);

/**
 * Renders the sweep as JSON into a new string, to be released with
 * [`cqnc_string_free`].
 *
 * # Safety
 * As for [`cqnc_sweep_to_csv`].
 */
enum CqncStatus cqnc_sweep_to_json(const struct CqncSweep *sweep, char **out);

/**
 * # Safety
 * `sweep` must be null or a handle not yet freed.
 */
void cqnc_sweep_free(struct CqncSweep *sweep);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void cqnc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CQNC_H */
