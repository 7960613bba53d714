#ifndef PARAHIGGS_H
#define PARAHIGGS_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define PH_OK 0

#define PH_ERR_NULL 1

#define PH_ERR_UTF8 2

#define PH_ERR_PARSE 3

#define PH_ERR_VALIDATION 4

#define PH_ERR_COMPUTATION 5

#define PH_ERR_BUFFER 6

#define PH_ERR_PANIC 7

/**
 * The report of one scenario run.
 */
typedef struct PhReport PhReport;

/**
 * A parsed and validated scenario.
 */
typedef struct PhScenario PhScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last nonzero code on this thread. The pointer stays valid
 * until the next failing call on the same thread.
 */
const char *ph_last_error(void);

/**
 * Parses and validates a scenario from JSON text.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
int32_t ph_scenario_parse(const char *json, struct PhScenario **out);

/**
 * Seeded scenario of the given kind, as `parahiggs generate` writes it.
 *
 * # Safety
 * `kind` must be a NUL-terminated string and `out` a valid pointer.
 */
int32_t ph_scenario_generate(const char *kind, uint64_t seed, size_t size, struct PhScenario **out);

/**
 * Overrides the truncation window. The scenario is left unchanged when the
 * new window is rejected.
 *
 * # Safety
 * `scenario` must be a live handle.
 */
int32_t ph_scenario_set_window(struct PhScenario *scenario, int32_t d1, int32_t d2);

/**
 * Overrides the seed.
 *
 * # Safety
 * `scenario` must be a live handle.
 */
int32_t ph_scenario_set_seed(struct PhScenario *scenario, uint64_t seed);

/**
 * The scenario as JSON, owned by the caller; free with [`ph_string_free`].
 *
 * # Safety
 * `scenario` must be a live handle and `out` a valid pointer.
 */
int32_t ph_scenario_to_json(const struct PhScenario *scenario, char **out);

/**
 * # Safety
 * `scenario` must be null or a handle not yet freed.
 */
void ph_scenario_free(struct PhScenario *scenario);

/**
 * Runs a scenario. Failing checks are not errors: inspect the report status.
 *
 * # Safety
 * `scenario` must be a live handle and `out` a valid pointer.
 */
int32_t ph_run(const struct PhScenario *scenario, struct PhReport **out);

/**
 * The report status as the CLI exit code: 0 pass, 1 fail, 2 hypothesis
 * failed.
 *
 * # Safety
 * `report` must be a live handle and `status` a valid pointer.
 */
int32_t ph_report_status(const struct PhReport *report, int32_t *status);

/**
 * Number of checks and how many of them passed.
 *
 * # Safety
 * `report` must be a live handle; `total` and `passed` valid pointers.
 */
int32_t ph_report_checks(const struct PhReport *report, size_t *total, size_t *passed);

/**
 * The report as JSON, or as text when `text` is set, owned by the caller; free with
 * [`ph_string_free`].
 *
 * # Safety
 * `report` must be a live handle and `out` a valid pointer.
 */
int32_t ph_report_render(const struct PhReport *report, bool text, char **out);

/**
 * # Safety
 * `report` must be null or a handle not yet freed.
 */
void ph_report_free(struct PhReport *report);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void ph_string_free(char *s);

/**
 * Dimensions of `Gr_l W(N)` for `l = -(n-1) ..= n-1` of an integer
 * nilpotent `n × n` matrix given row-major. `dims` receives `2n - 1`
 * entries; for `n = 0` nothing is written.
 *
 * # Safety
 * `entries` must point to `n * n` values and `dims` to `dims_len` writable
 * slots.
 */
int32_t ph_weight_graded_dims(size_t n, const int64_t *entries, size_t *dims, size_t dims_len);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* PARAHIGGS_H */
