#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "kverify/kverify.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  kv_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("model handles") {
  kv_model* m = nullptr;
  REQUIRE(kv_model_from_catalog("cp1xcp1", &m) == KV_OK);
  CHECK(kv_model_dimension(m) == 4);
  CHECK(std::string(kv_model_name(m)) == "cp1xcp1");
  kv_model_free(m);

  CHECK(kv_model_from_catalog("nope", &m) == KV_UNKNOWN_MODEL);
  CHECK(std::string(kv_last_error()).find("nope") != std::string::npos);
  CHECK(std::string(kv_status_string(KV_UNKNOWN_MODEL)) == "UnknownModel");
  CHECK(std::string(kv_status_string(KV_OK)) == "Ok");
  CHECK(kv_model_from_catalog(nullptr, &m) == KV_INVALID_ARGUMENT);

  REQUIRE(kv_model_from_string("kind: fubini_study\nname: custom\nN: 2\nc: 2\n", &m) == KV_OK);
  CHECK(std::string(kv_model_name(m)) == "custom");
  kv_model_free(m);
  CHECK(kv_model_from_string("kind: fubini_study\nbogus: 1\n", &m) == KV_PARSE_ERROR);
  CHECK(kv_model_from_string("kind: fubini_study\nN: 2\nc: -1\n", &m) == KV_INVALID_ARGUMENT);

  const std::string path = std::string(KVERIFY_SOURCE_DIR) + "/models/ch2.yaml";
  REQUIRE(kv_model_from_file(path.c_str(), &m) == KV_OK);
  CHECK(kv_model_dimension(m) == 4);
  kv_model_free(m);
  REQUIRE(kv_model_resolve(path.c_str(), &m) == KV_OK);
  kv_model_free(m);
  CHECK(kv_model_from_file("/nonexistent.yaml", &m) == KV_UNKNOWN_MODEL);
  kv_model_free(nullptr);
}

TEST_CASE("lists") {
  char* s = nullptr;
  REQUIRE(kv_catalog_list(&s) == KV_OK);
  const std::string cat = take(s);
  CHECK(cat.find("cp1xcp1\n") != std::string::npos);
  REQUIRE(kv_suite_list(&s) == KV_OK);
  CHECK(take(s).find("gray-L\n") != std::string::npos);
}

TEST_CASE("verification through the C interface") {
  kv_model* m = nullptr;
  REQUIRE(kv_model_from_catalog("cp1xcp1", &m) == KV_OK);
  kv_options o;
  kv_options_default(&o);
  o.points = 3;
  o.timing = 0;
  kv_reports* r = nullptr;
  REQUIRE(kv_verify(m, "theorem4", &o, &r) == KV_OK);
  REQUIRE(kv_reports_count(r) == 3);
  CHECK(kv_reports_all_pass(r) == 1);
  kv_report_view v;
  REQUIRE(kv_reports_get(r, 1, &v) == KV_OK);
  CHECK(std::string(v.identity) == "theorem4.ratio");
  CHECK(v.has_point == 1);
  CHECK(v.coord_count == 4);
  CHECK(v.lhs == doctest::Approx(2.0 / 3.0));
  CHECK(v.runtime_ms == 0.0);
  CHECK(std::string(v.kind) == "equality");
  CHECK(kv_reports_get(r, 3, &v) == KV_INVALID_ARGUMENT);

  char* s = nullptr;
  REQUIRE(kv_reports_format(r, KV_FORMAT_JSON, &s) == KV_OK);
  const std::string json = take(s);
  CHECK(std::count(json.begin(), json.end(), '\n') == 3);
  REQUIRE(kv_reports_format(r, KV_FORMAT_CSV, &s) == KV_OK);
  const std::string csv = take(s);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  kv_reports_free(r);

  CHECK(kv_verify(m, "nonsense", &o, &r) == KV_UNKNOWN_SUITE);
  kv_model_free(m);

  // Precondition failures become failing reports, not status errors.
  REQUIRE(kv_model_from_catalog("cp2", &m) == KV_OK);
  REQUIRE(kv_verify(m, "rayleigh", &o, &r) == KV_OK);
  CHECK(kv_reports_all_pass(r) == 0);
  REQUIRE(kv_reports_get(r, 0, &v) == KV_OK);
  CHECK(std::string(v.note).rfind("ConstantH", 0) == 0);
  CHECK(std::isnan(v.lhs));
  kv_reports_free(r);
  kv_model_free(m);

  REQUIRE(kv_model_from_catalog("conformal_cp1xcp1", &m) == KV_OK);
  REQUIRE(kv_verify(m, "all", &o, &r) == KV_OK);
  CHECK(kv_reports_skipped_count(r) == 6);
  CHECK(std::string(kv_reports_skipped(r, 0)).rfind("variance", 0) == 0);
  CHECK(kv_reports_skipped(r, 99) == nullptr);
  kv_reports_free(r);
  kv_model_free(m);
}

TEST_CASE("curvature and stats dumps") {
  kv_model* m = nullptr;
  REQUIRE(kv_model_from_catalog("cp1xcp1", &m) == KV_OK);
  const double x[4] = {0.1, 0.2, -0.3, 0.05};
  char* s = nullptr;
  REQUIRE(kv_curvature_dump(m, 0, x, 4, 1, &s) == KV_OK);
  const auto c = nlohmann::json::parse(take(s));
  CHECK(c["dimension"] == 4);
  CHECK(c["R"]["values"].size() == 256);
  CHECK(c["dR"]["values"].size() == 1024);
  CHECK(c["d2R"].is_null());
  CHECK(c["scalar"].get<double>() == doctest::Approx(4.0));
  CHECK(c["star_scalar"].get<double>() == doctest::Approx(4.0));

  REQUIRE(kv_stats_dump(m, 0, nullptr, 0, &s) == KV_OK);
  const auto st = nlohmann::json::parse(take(s));
  CHECK(st["h_av"].get<double>() == doctest::Approx(2.0 / 3.0));
  CHECK(st["variance"].get<double>() == doctest::Approx(1.0 / 45.0));
  CHECK(st["gradv_sq_integral"].get<double>() == doctest::Approx(8.0 / 15.0));
  CHECK(st["h_max"].get<double>() == doctest::Approx(1.0));

  const double far[4] = {1e6, 0, 0, 0};
  CHECK(kv_curvature_dump(m, 0, far, 4, 0, &s) == KV_OUT_OF_CHART);
  CHECK(kv_curvature_dump(m, 0, x, 4, 3, &s) == KV_ORDER_UNSUPPORTED);
  kv_model_free(m);
}
