#ifndef KVERIFY_KVERIFY_H
#define KVERIFY_KVERIFY_H

/* C interface to the kverify curvature verification engine.
 *
 * Objects are opaque handles released with the matching *_free call.
 * Strings returned through char** are owned by the caller and released with
 * kv_string_free. Every function returning kv_status records a message for
 * kv_last_error on failure (per thread). */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define KV_API __declspec(dllexport)
#elif defined(__GNUC__)
#define KV_API __attribute__((visibility("default")))
#else
#define KV_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct kv_model kv_model;
typedef struct kv_reports kv_reports;

typedef enum kv_status {
  KV_OK = 0,
  KV_INVALID_ARGUMENT = 1,
  KV_UNKNOWN_MODEL = 2,
  KV_UNKNOWN_SUITE = 3,
  KV_PARSE_ERROR = 4,
  KV_OUT_OF_CHART = 5,
  KV_ORDER_UNSUPPORTED = 6,
  KV_DEGENERATE_METRIC = 7,
  KV_NOT_EINSTEIN = 8,
  KV_NOT_KAHLER = 9,
  KV_NOT_ADAPTED = 10,
  KV_CONSTANT_H = 11,
  KV_NOT_NORMALIZED = 12,
  KV_FLAT_MODEL = 13,
  KV_DEGENERATE_RATIO = 14,
  KV_NON_CONVERGENCE = 15,
  KV_NON_HOMOGENEOUS = 16,
  KV_INTERNAL = 17
} kv_status;

typedef enum kv_format { KV_FORMAT_JSON = 0, KV_FORMAT_CSV = 1, KV_FORMAT_TABLE = 2 } kv_format;

typedef struct kv_options {
  int points;      /* samples per suite; 0 selects the suite default */
  double tol;      /* <= 0 selects the suite default */
  uint64_t seed;
  int timing;      /* 0 zeroes runtime_ms */
  int threads;     /* 0 reads KVERIFY_THREADS, then hardware concurrency */
} kv_options;

typedef struct kv_report_view {
  const char* identity;
  const char* model;
  int has_point;
  int chart_id;
  const double* coords;
  size_t coord_count;
  double lhs;
  double rhs;
  double abs_error;
  double rel_error;
  double tol;
  int pass;
  double runtime_ms;
  const char* kind; /* "equality" or "upper_bound" */
  const char* note;
} kv_report_view;

KV_API const char* kv_version(void);
KV_API const char* kv_last_error(void);
KV_API const char* kv_status_string(kv_status status);
KV_API void kv_string_free(char* s);

KV_API void kv_options_default(kv_options* options);

KV_API kv_status kv_model_from_catalog(const char* name, kv_model** out);
KV_API kv_status kv_model_from_file(const char* path, kv_model** out);
KV_API kv_status kv_model_from_string(const char* yaml, kv_model** out);
/* Catalog name first, then spec file path. */
KV_API kv_status kv_model_resolve(const char* name_or_path, kv_model** out);
KV_API void kv_model_free(kv_model* model);
KV_API int kv_model_dimension(const kv_model* model);
KV_API const char* kv_model_name(const kv_model* model);

/* Newline-separated catalog names. */
KV_API kv_status kv_catalog_list(char** out);
/* Newline-separated suite names. */
KV_API kv_status kv_suite_list(char** out);

KV_API kv_status kv_verify(const kv_model* model, const char* suite, const kv_options* options, kv_reports** out);
KV_API size_t kv_reports_count(const kv_reports* reports);
KV_API int kv_reports_all_pass(const kv_reports* reports);
/* The view borrows from `reports` and is valid until kv_reports_free. */
KV_API kv_status kv_reports_get(const kv_reports* reports, size_t index, kv_report_view* out);
KV_API size_t kv_reports_skipped_count(const kv_reports* reports);
KV_API const char* kv_reports_skipped(const kv_reports* reports, size_t index);
KV_API kv_status kv_reports_format(const kv_reports* reports, kv_format format, char** out);
KV_API void kv_reports_free(kv_reports* reports);

/* JSON dumps at a chart point; coords == NULL selects the model origin. */
KV_API kv_status kv_curvature_dump(const kv_model* model, int chart_id, const double* coords, size_t count,
                                   int deriv_order, char** out_json);
KV_API kv_status kv_stats_dump(const kv_model* model, int chart_id, const double* coords, size_t count,
                               char** out_json);

#ifdef __cplusplus
}
#endif

#endif
