#ifndef QHA_H
#define QHA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QhaStatus {
  QHA_STATUS_OK = 0,
  /**
   * The suite ran and at least one check failed.
   */
  QHA_STATUS_CHECK_FAILED = 1,
  /**
   * Unknown scenario, unreadable or invalid file.
   */
  QHA_STATUS_CONFIG = 2,
  QHA_STATUS_NULL_POINTER = 3,
  QHA_STATUS_INVALID_ARGUMENT = 4,
  /**
   * The Duflo–Moore estimate is not positive definite.
   */
  QHA_STATUS_ESTIMATOR = 5,
  /**
   * Numerical or structural error inside the core library.
   */
  QHA_STATUS_NUMERICAL = 6,
  QHA_STATUS_PANIC = 7,
} QhaStatus;

/**
 * Opaque suite result handle.
 */
typedef struct QhaReport QhaReport;

/**
 * Opaque scenario handle.
 */
typedef struct QhaScenario QhaScenario;

/**
 * Scalar summary of a Duflo–Moore estimate. `d` is NaN when `D` is not scalar.
 */
typedef struct QhaDuflo {
  double d;
  double d_inverse;
  bool is_scalar;
  double off_scalar_residual;
  double cross_check_residual;
  double min_eigenvalue;
} QhaDuflo;

/**
 * One check of a suite result.
 */
typedef struct QhaCheck {
  bool pass;
  double lhs_re;
  double lhs_im;
  double rhs_re;
  double rhs_im;
  double abs_err;
  double rel_err;
  double tol_abs;
  double tol_rel;
} QhaCheck;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty if none.
 */
const char *qha_last_error(void);

/**
 * Library version, static string.
 */
const char *qha_version(void);

/**
 * Builtin scenario by id, e.g. `"wh:4"`.
 *
 * # Safety
 * `id` must be a nul-terminated string and `out` a valid pointer.
 */
enum QhaStatus qha_scenario_builtin(const char *id, struct QhaScenario **out);

/**
 * Scenario from a TOML file.
 *
 * # Safety
 * `path` must be a nul-terminated string and `out` a valid pointer.
 */
enum QhaStatus qha_scenario_load(const char *path, struct QhaScenario **out);

/**
 * Scenario from TOML text.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a valid pointer.
 */
enum QhaStatus qha_scenario_parse(const char *text, struct QhaScenario **out);

/**
 * # Safety
 * `scenario` must come from this library or be null.
 */
void qha_scenario_free(struct QhaScenario *scenario);

/**
 * # Safety
 * `scenario` must be a live handle.
 */
enum QhaStatus qha_scenario_set_seed(struct QhaScenario *scenario, uint64_t seed);

/**
 * Overrides the relative and absolute tolerances; both must be finite, `rel > 0`, `abs ≥ 0`.
 *
 * # Safety
 * `scenario` must be a live handle.
 */
enum QhaStatus qha_scenario_set_tolerances(struct QhaScenario *scenario, double rel, double abs);

/**
 * Seeded trials per inequality check and pairs for the orthogonality relation.
 *
 * # Safety
 * `scenario` must be a live handle.
 */
enum QhaStatus qha_scenario_set_trials(struct QhaScenario *scenario, size_t trials, size_t pairs);

/**
 * The scenario as TOML. Free with [`qha_string_free`].
 *
 * # Safety
 * `scenario` must be a live handle and `out` a valid pointer.
 */
enum QhaStatus qha_scenario_to_toml(const struct QhaScenario *scenario, char **out);

/**
 * Runs the full suite. Returns `QHA_STATUS_OK` when every check passes and
 * `QHA_STATUS_CHECK_FAILED` otherwise; in both cases `*out` receives the result.
 *
 * # Safety
 * `scenario` must be a live handle and `out` a valid pointer.
 */
enum QhaStatus qha_run_suite(const struct QhaScenario *scenario, struct QhaReport **out);

/**
 * Estimates `D` for a finite-group scenario.
 *
 * # Safety
 * `scenario` must be a live handle and `out` a valid pointer.
 */
enum QhaStatus qha_estimate_duflo(const struct QhaScenario *scenario, struct QhaDuflo *out);

/**
 * # Safety
 * `report` must come from this library or be null.
 */
void qha_report_free(struct QhaReport *report);

/**
 * Number of checks; 0 for a null handle.
 *
 * # Safety
 * `report` must be a live handle or null.
 */
size_t qha_report_len(const struct QhaReport *report);

/**
 * Whether every check passed; false for a null handle.
 *
 * # Safety
 * `report` must be a live handle or null.
 */
bool qha_report_passed(const struct QhaReport *report);

/**
 * Numbers of check `index`.
 *
 * # Safety
 * `report` must be a live handle and `out` a valid pointer.
 */
enum QhaStatus qha_report_check(const struct QhaReport *report, size_t index, struct QhaCheck *out);

/**
 * Name of check `index`, owned by the report; null when out of range.
 *
 * # Safety
 * `report` must be a live handle or null.
 */
const char *qha_report_check_name(const struct QhaReport *report, size_t index);

/**
 * The full result as JSON. Free with [`qha_string_free`].
 *
 * # Safety
 * `report` must be a live handle and `out` a valid pointer.
 */
enum QhaStatus qha_report_to_json(const struct QhaReport *report, char **out);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void qha_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QHA_H */
