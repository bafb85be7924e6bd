// Command-line front end over the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kverify/kverify.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct ModelDeleter {
  void operator()(kv_model* m) const { kv_model_free(m); }
};
struct ReportsDeleter {
  void operator()(kv_reports* r) const { kv_reports_free(r); }
};
struct StringDeleter {
  void operator()(char* s) const { kv_string_free(s); }
};
using ModelPtr = std::unique_ptr<kv_model, ModelDeleter>;
using ReportsPtr = std::unique_ptr<kv_reports, ReportsDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

int report_error(kv_status status) {
  std::cerr << "kverify: " << kv_status_string(status) << ": " << kv_last_error() << "\n";
  return status == KV_UNKNOWN_MODEL || status == KV_UNKNOWN_SUITE || status == KV_INVALID_ARGUMENT ||
                 status == KV_PARSE_ERROR
             ? kExitUsage
             : kExitFail;
}

// "x1,x2,..." or "chart:x1,x2,...".
bool parse_point(const std::string& text, int& chart, std::vector<double>& coords) {
  std::string body = text;
  chart = 0;
  if (const auto colon = text.find(':'); colon != std::string::npos) {
    try {
      chart = std::stoi(text.substr(0, colon));
    } catch (const std::exception&) {
      return false;
    }
    body = text.substr(colon + 1);
  }
  std::stringstream ss(body);
  std::string item;
  coords.clear();
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      coords.push_back(std::stod(item, &used));
      if (used != item.size()) return false;
    } catch (const std::exception&) {
      return false;
    }
  }
  return !coords.empty();
}

int write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return kExitPass;
  }
  std::ofstream out(path);
  if (!out) {
    std::cerr << "kverify: cannot write " << path << "\n";
    return kExitUsage;
  }
  out << text;
  return kExitPass;
}

int load_model(const std::string& spec, ModelPtr& model) {
  kv_model* raw = nullptr;
  const kv_status st = kv_model_resolve(spec.c_str(), &raw);
  if (st != KV_OK) return report_error(st);
  model.reset(raw);
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curvature identity verification on explicit model manifolds"};
  app.require_subcommand(1);

  std::string suite, model_spec, out_path, format = "json", point_text;
  int points = 0;
  double tol = 0.0;
  std::uint64_t seed = 0;
  bool no_timing = false;
  int deriv_order = 2;

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("--suite", suite, "Suite name")->required();
  verify->add_option("--model", model_spec, "Catalog name or model spec file")->required();
  verify->add_option("--points", points, "Samples per suite")->check(CLI::PositiveNumber);
  verify->add_option("--tol", tol, "Tolerance (default per suite)")->check(CLI::PositiveNumber);
  verify->add_option("--seed", seed, "Random seed");
  verify->add_option("--out", out_path, "Write reports to a file");
  verify->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv", "table"}));
  verify->add_flag("--no-timing", no_timing, "Zero runtime_ms for reproducible output");

  auto* curvature = app.add_subcommand("curvature", "Dump curvature data at a point");
  curvature->add_option("--model", model_spec, "Catalog name or model spec file")->required();
  curvature->add_option("--point", point_text, "Point as [chart:]x1,x2,...");
  curvature->add_option("--order", deriv_order, "Derivative order of R (0-2)")->check(CLI::Range(0, 2));
  curvature->add_option("--out", out_path, "Write to a file");

  auto* stats = app.add_subcommand("stats", "Dump fiber statistics of H at a point");
  stats->add_option("--model", model_spec, "Catalog name or model spec file")->required();
  stats->add_option("--point", point_text, "Point as [chart:]x1,x2,...");
  stats->add_option("--out", out_path, "Write to a file");

  auto* catalog = app.add_subcommand("catalog", "List catalog models");
  auto* suites = app.add_subcommand("suites", "List suite names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  if (*catalog || *suites) {
    char* raw = nullptr;
    const kv_status st = *catalog ? kv_catalog_list(&raw) : kv_suite_list(&raw);
    if (st != KV_OK) return report_error(st);
    StringPtr text(raw);
    std::cout << text.get();
    return kExitPass;
  }

  ModelPtr model;
  if (const int rc = load_model(model_spec, model); rc != kExitPass) return rc;

  if (*verify) {
    kv_options options;
    kv_options_default(&options);
    options.points = points;
    options.tol = tol;
    options.seed = seed;
    options.timing = no_timing ? 0 : 1;
    kv_reports* raw = nullptr;
    const kv_status st = kv_verify(model.get(), suite.c_str(), &options, &raw);
    if (st != KV_OK) return report_error(st);
    ReportsPtr reports(raw);
    for (std::size_t i = 0; i < kv_reports_skipped_count(reports.get()); ++i) {
      std::cerr << "skipped " << kv_reports_skipped(reports.get(), i) << "\n";
    }
    const kv_format fmt = format == "csv" ? KV_FORMAT_CSV : format == "table" ? KV_FORMAT_TABLE : KV_FORMAT_JSON;
    char* text_raw = nullptr;
    const kv_status fst = kv_reports_format(reports.get(), fmt, &text_raw);
    if (fst != KV_OK) return report_error(fst);
    StringPtr text(text_raw);
    if (const int rc = write_output(text.get(), out_path); rc != kExitPass) return rc;
    for (std::size_t i = 0; i < kv_reports_count(reports.get()); ++i) {
      kv_report_view view;
      if (kv_reports_get(reports.get(), i, &view) == KV_OK && !view.pass) {
        std::cerr << "FAIL " << view.identity;
        if (view.note && *view.note) std::cerr << " (" << view.note << ")";
        std::cerr << "\n";
      }
    }
    return kv_reports_all_pass(reports.get()) ? kExitPass : kExitFail;
  }

  int chart = 0;
  std::vector<double> coords;
  if (!point_text.empty() && !parse_point(point_text, chart, coords)) {
    std::cerr << "kverify: malformed --point '" << point_text << "'\n";
    return kExitUsage;
  }
  const double* coord_ptr = point_text.empty() ? nullptr : coords.data();
  char* raw = nullptr;
  const kv_status st = *curvature
                           ? kv_curvature_dump(model.get(), chart, coord_ptr, coords.size(), deriv_order, &raw)
                           : kv_stats_dump(model.get(), chart, coord_ptr, coords.size(), &raw);
  if (st != KV_OK) return report_error(st);
  StringPtr text(raw);
  return write_output(text.get(), out_path);
}
