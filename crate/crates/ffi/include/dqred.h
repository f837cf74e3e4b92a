#ifndef DQRED_H
#define DQRED_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible entry point.
typedef enum DqStatus {
  DQ_STATUS_OK = 0,
  // A required pointer argument was null.
  DQ_STATUS_NULL_ARGUMENT = 1,
  // A string argument was not valid UTF-8.
  DQ_STATUS_INVALID_UTF8 = 2,
  // Malformed or invalid scene, unknown suite or format.
  DQ_STATUS_CONFIG = 3,
  // The computation itself reported an error.
  DQ_STATUS_COMPUTE = 4,
  // An internal panic was caught at the boundary.
  DQ_STATUS_PANIC = 5,
} DqStatus;

// A finished verification report.
typedef struct DqReport DqReport;

// A validated scene.
typedef struct DqScene DqScene;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty if none.
// The pointer stays valid until the next failing call on the same thread.
const char *dq_last_error(void);

// Loads and validates a scene file.
//
// # Safety
// `path` must be a NUL-terminated string and `out` a valid pointer.
enum DqStatus dq_scene_load(const char *path, struct DqScene **out);

// Validates a scene given as JSON text.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum DqStatus dq_scene_from_json(const char *json, struct DqScene **out);

// Truncation order of the scene, or -1 for a null handle.
//
// # Safety
// `scene` must be null or a live handle.
int64_t dq_scene_order(const struct DqScene *scene);

// # Safety
// `scene` must be null or a handle from this library, released once.
void dq_scene_free(struct DqScene *scene);

// Runs a suite (`star`, `koszul`, …, or `all`) on the scene.
//
// # Safety
// `scene` must be a live handle, `suite` a NUL-terminated string and `out` a valid pointer.
enum DqStatus dq_run_suite(const struct DqScene *scene, const char *suite, struct DqReport **out);

// Status counts of a report.
//
// # Safety
// `report` must be a live handle; the count pointers may be null.
enum DqStatus dq_report_counts(const struct DqReport *report,
                               size_t *pass,
                               size_t *fail,
                               size_t *skipped);

// Renders a report as `json` or `text`. Free the string with `dq_string_free`.
//
// # Safety
// `report` must be a live handle, `format` a NUL-terminated string and `out` a valid pointer.
enum DqStatus dq_report_render(const struct DqReport *report, const char *format, char **out);

// # Safety
// `report` must be null or a handle from this library, released once.
void dq_report_free(struct DqReport *report);

// # Safety
// `s` must be null or a string returned by this library, released once.
void dq_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DQRED_H */
