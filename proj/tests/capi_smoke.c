/* Plain C client: the header must compile as C and the library must link without C++ flags. */
#include <stdio.h>
#include <string.h>

#include "kverify/kverify.h"

int main(void) {
  kv_model* model = NULL;
  kv_reports* reports = NULL;
  kv_options options;
  kv_report_view view;
  int ok = 1;

  if (kv_model_from_catalog("cp2", &model) != KV_OK) return 1;
  kv_options_default(&options);
  options.timing = 0;
  if (kv_verify(model, "berger", &options, &reports) != KV_OK) return 1;
  ok &= kv_reports_count(reports) == 1;
  ok &= kv_reports_all_pass(reports);
  ok &= kv_reports_get(reports, 0, &view) == KV_OK;
  ok &= strcmp(view.identity, "berger.fiber_average") == 0;
  ok &= view.lhs > 0.999999 && view.lhs < 1.000001;
  kv_reports_free(reports);
  kv_model_free(model);

  ok &= kv_model_from_catalog("nope", &model) == KV_UNKNOWN_MODEL;
  ok &= strlen(kv_last_error()) > 0;
  printf("%s\n", ok ? "ok" : "failed");
  return ok ? 0 : 1;
}
