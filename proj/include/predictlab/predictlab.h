#ifndef PREDICTLAB_H
#define PREDICTLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PLAB_API __declspec(dllexport)
#else
#define PLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as CLI exit codes. */
typedef enum {
  PLAB_OK = 0,
  PLAB_ERR_OTHER = 1,
  PLAB_ERR_INVALID = 2, /* schema or parameter violation */
  PLAB_ERR_BUDGET = 3,  /* enumeration or length cap exceeded */
  PLAB_ERR_NUMERIC = 4  /* numeric hard failure or overflow */
} plab_status;

typedef struct plab_report plab_report;

/* Optional run-level overrides; zero-initialize and set the has_* flags. */
typedef struct {
  int has_seed;
  uint64_t seed;
  int has_window;
  int64_t window_lo;
  int64_t window_hi;
  int has_tol;
  double tol;
  const char* format;   /* "json" or "csv"; NULL keeps the manifest value */
  const char* out_path; /* NULL keeps the manifest value */
} plab_overrides;

/* The run functions store a report in *out whenever the input parsed, even
   when the status is nonzero. Free it with plab_report_free. */
PLAB_API plab_status plab_run_manifest_json(const char* manifest_json, const plab_overrides* overrides, plab_report** out);
PLAB_API plab_status plab_run_suite(const char* name, const plab_overrides* overrides, plab_report** out);
PLAB_API plab_status plab_execute(const char* module, const char* op, const char* params_json,
                                  const plab_overrides* overrides, plab_report** out);

PLAB_API int plab_report_exit_code(const plab_report* report);
PLAB_API int plab_report_verdicts_pass(const plab_report* report);
PLAB_API double plab_report_wall_seconds(const plab_report* report);
PLAB_API const char* plab_report_error(const plab_report* report);
PLAB_API size_t plab_report_warning_count(const plab_report* report);
PLAB_API const char* plab_report_warning(const plab_report* report, size_t index);
PLAB_API size_t plab_report_operation_count(const plab_report* report);
/* Result object of one operation as JSON. Valid until the report is freed. */
PLAB_API const char* plab_report_result_json(plab_report* report, size_t index);
/* Rendered report ("json" or "csv"); NULL on a bad format. Valid until the next render call or free. */
PLAB_API const char* plab_report_render(plab_report* report, const char* format);
/* CSV table of a single-operation report, or the flat CSV report otherwise. */
PLAB_API const char* plab_report_table_csv(plab_report* report);
PLAB_API void plab_report_free(plab_report* report);

/* JSON array of {"name", "description"}. Static storage. */
PLAB_API const char* plab_list_suites_json(void);
/* JSON array of ["module", "op"] pairs. Static storage. */
PLAB_API const char* plab_list_ops_json(void);

/* Samples a model and writes the compact binary path format. */
PLAB_API plab_status plab_sample_binary(const char* model_json, int64_t length, uint64_t seed, const char* path);

/* Message for the last failing call on this thread; empty when none. */
PLAB_API const char* plab_last_error(void);
PLAB_API const char* plab_version(void);

#ifdef __cplusplus
}
#endif

#endif
