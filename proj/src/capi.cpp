#include "kverify/kverify.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "json.hpp"
#include "kverify/error.hpp"
#include "kverify/fiber.hpp"
#include "kverify/model_config.hpp"
#include "kverify/suites.hpp"

struct kv_model {
  kverify::ModelManifold model;
};

struct kv_reports {
  kverify::SuiteResult result;
};

namespace {

thread_local std::string last_error;

kv_status record(kv_status status, const std::string& message) {
  last_error = message;
  return status;
}

template <typename F>
kv_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return KV_OK;
  } catch (const kverify::Error& e) {
    return record(static_cast<kv_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return record(KV_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return record(KV_INTERNAL, e.what());
  }
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool condition, const char* message) {
  if (!condition) kverify::fail(kverify::ErrorCode::InvalidArgument, message);
}

kverify::ChartPoint point_of(const kverify::ModelManifold& m, int chart_id, const double* coords, size_t count) {
  if (!coords) return m.origin();
  return kverify::ChartPoint{chart_id, std::vector<double>(coords, coords + count)};
}

nlohmann::json tensor_json(const kverify::Tensor& t) {
  return {{"rank", t.rank()}, {"dimension", t.dim()}, {"values", t.values()}};
}

nlohmann::json matrix_json(const kverify::Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) row[static_cast<std::size_t>(j)] = m(i, j);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

extern "C" {

const char* kv_version(void) { return "0.1.0"; }

const char* kv_last_error(void) { return last_error.c_str(); }

const char* kv_status_string(kv_status status) {
  if (status == KV_OK) return "Ok";
  if (status < KV_INVALID_ARGUMENT || status > KV_INTERNAL) return "Unknown";
  return kverify::error_code_name(static_cast<kverify::ErrorCode>(static_cast<int>(status)));
}

void kv_string_free(char* s) { std::free(s); }

void kv_options_default(kv_options* options) {
  if (!options) return;
  options->points = 0;
  options->tol = 0.0;
  options->seed = 0;
  options->timing = 1;
  options->threads = 0;
}

kv_status kv_model_from_catalog(const char* name, kv_model** out) {
  return guarded([&] {
    require(name && out, "null argument");
    *out = new kv_model{kverify::make_catalog_model(name)};
  });
}

kv_status kv_model_from_file(const char* path, kv_model** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new kv_model{kverify::make_model(kverify::load_model_spec(path))};
  });
}

kv_status kv_model_from_string(const char* yaml, kv_model** out) {
  return guarded([&] {
    require(yaml && out, "null argument");
    *out = new kv_model{kverify::make_model(kverify::parse_model_spec(yaml))};
  });
}

kv_status kv_model_resolve(const char* name_or_path, kv_model** out) {
  return guarded([&] {
    require(name_or_path && out, "null argument");
    *out = new kv_model{kverify::resolve_model(name_or_path)};
  });
}

void kv_model_free(kv_model* model) { delete model; }

int kv_model_dimension(const kv_model* model) { return model ? model->model.dimension() : 0; }

const char* kv_model_name(const kv_model* model) { return model ? model->model.name().c_str() : ""; }

kv_status kv_catalog_list(char** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    std::string s;
    for (const auto& n : kverify::catalog_names()) s += n + "\n";
    *out = duplicate(s);
  });
}

kv_status kv_suite_list(char** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    std::string s;
    for (const auto& n : kverify::suite_names()) s += n + "\n";
    *out = duplicate(s);
  });
}

kv_status kv_verify(const kv_model* model, const char* suite, const kv_options* options, kv_reports** out) {
  return guarded([&] {
    require(model && suite && out, "null argument");
    kv_options opt;
    kv_options_default(&opt);
    if (options) opt = *options;
    kverify::SuiteOptions so;
    if (opt.points > 0) so.points = opt.points;
    if (opt.tol > 0.0) so.tol = opt.tol;
    so.seed = opt.seed;
    so.timing = opt.timing != 0;
    so.threads = opt.threads;
    auto result = std::make_unique<kv_reports>(kv_reports{kverify::run_suite(model->model, suite, so)});
    *out = result.release();
  });
}

size_t kv_reports_count(const kv_reports* reports) { return reports ? reports->result.reports.size() : 0; }

int kv_reports_all_pass(const kv_reports* reports) { return reports && reports->result.all_pass() ? 1 : 0; }

kv_status kv_reports_get(const kv_reports* reports, size_t index, kv_report_view* out) {
  return guarded([&] {
    require(reports && out, "null argument");
    require(index < reports->result.reports.size(), "report index out of range");
    const auto& r = reports->result.reports[index];
    out->identity = r.identity.c_str();
    out->model = r.model.c_str();
    out->has_point = r.point ? 1 : 0;
    out->chart_id = r.point ? r.point->chart_id : 0;
    out->coords = r.point ? r.point->coords.data() : nullptr;
    out->coord_count = r.point ? r.point->coords.size() : 0;
    out->lhs = r.lhs;
    out->rhs = r.rhs;
    out->abs_error = r.abs_error;
    out->rel_error = r.rel_error;
    out->tol = r.tol;
    out->pass = r.pass ? 1 : 0;
    out->runtime_ms = r.runtime_ms;
    out->kind = kverify::report_kind_name(r.kind);
    out->note = r.note.c_str();
  });
}

size_t kv_reports_skipped_count(const kv_reports* reports) { return reports ? reports->result.skipped.size() : 0; }

const char* kv_reports_skipped(const kv_reports* reports, size_t index) {
  if (!reports || index >= reports->result.skipped.size()) return nullptr;
  return reports->result.skipped[index].c_str();
}

kv_status kv_reports_format(const kv_reports* reports, kv_format format, char** out) {
  return guarded([&] {
    require(reports && out, "null argument");
    kverify::ReportFormat f = kverify::ReportFormat::Json;
    switch (format) {
      case KV_FORMAT_JSON: f = kverify::ReportFormat::Json; break;
      case KV_FORMAT_CSV: f = kverify::ReportFormat::Csv; break;
      case KV_FORMAT_TABLE: f = kverify::ReportFormat::Table; break;
      default: kverify::fail(kverify::ErrorCode::InvalidArgument, "unknown report format");
    }
    *out = duplicate(kverify::format_reports(reports->result.reports, f));
  });
}

void kv_reports_free(kv_reports* reports) { delete reports; }

kv_status kv_curvature_dump(const kv_model* model, int chart_id, const double* coords, size_t count, int deriv_order,
                            char** out_json) {
  return guarded([&] {
    require(model && out_json, "null argument");
    const auto& m = model->model;
    const auto p = point_of(m, chart_id, coords, count);
    const kverify::PointGeometry geo(m, p, deriv_order);
    const auto& c = geo.curvature();
    nlohmann::json j;
    j["model"] = m.name();
    j["point"] = {{"chart_id", p.chart_id}, {"coords", p.coords}};
    j["dimension"] = c.dimension;
    j["deriv_order"] = c.deriv_order;
    j["frame"] = {{"vectors", matrix_json(geo.frame().vectors)}, {"adapted", geo.frame().adapted}};
    j["R"] = tensor_json(c.R);
    j["dR"] = c.dR ? tensor_json(*c.dR) : nlohmann::json(nullptr);
    j["d2R"] = c.d2R ? tensor_json(*c.d2R) : nlohmann::json(nullptr);
    j["ricci"] = matrix_json(c.ricci);
    j["scalar"] = c.scalar;
    if (geo.has_complex_structure()) {
      const auto star = kverify::star_curvature(c, geo.complex_structure());
      j["star_ricci"] = matrix_json(star.star_ricci);
      j["star_scalar"] = star.star_scalar;
      j["nabla_j_max"] = geo.nabla_j().max_abs();
    }
    *out_json = duplicate(j.dump(2) + "\n");
  });
}

kv_status kv_stats_dump(const kv_model* model, int chart_id, const double* coords, size_t count, char** out_json) {
  return guarded([&] {
    require(model && out_json, "null argument");
    const auto& m = model->model;
    const auto p = point_of(m, chart_id, coords, count);
    const auto s = kverify::h_stats(m, p);
    auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    nlohmann::json j;
    j["model"] = m.name();
    j["point"] = {{"chart_id", p.chart_id}, {"coords", p.coords}};
    j["h_av"] = s.h_av;
    j["h_max"] = s.h_max;
    j["variance"] = s.variance;
    j["gradv_sq_integral"] = s.gradv_sq_integral;
    j["einstein_constant"] = opt(s.einstein_constant);
    j["h_av_expected"] = opt(s.h_av_expected);
    j["lap_deviation"] = opt(s.lap_deviation);
    *out_json = duplicate(j.dump(2) + "\n");
  });
}

}  // extern "C"
