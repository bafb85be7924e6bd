#include "kverify/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

#include "kverify/error.hpp"

namespace kverify {

using nlohmann::json;

VerificationReport make_report(std::string identity, std::string model, std::optional<ChartPoint> point, double lhs,
                               double rhs, double tol, ReportKind kind) {
  VerificationReport r;
  r.identity = std::move(identity);
  r.model = std::move(model);
  r.point = std::move(point);
  r.lhs = lhs;
  r.rhs = rhs;
  r.tol = tol;
  r.kind = kind;
  r.abs_error = std::abs(lhs - rhs);
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  r.rel_error = scale > 0.0 ? r.abs_error / scale : 0.0;
  if (kind == ReportKind::Equality) {
    r.pass = r.abs_error <= tol || r.rel_error <= tol;
  } else {
    r.pass = lhs <= rhs + tol * std::max(1.0, std::abs(rhs));
  }
  if (!std::isfinite(lhs) || !std::isfinite(rhs)) r.pass = false;
  return r;
}

VerificationReport failed_report(std::string identity, std::string model, std::string note) {
  VerificationReport r;
  r.identity = std::move(identity);
  r.model = std::move(model);
  r.lhs = std::nan("");
  r.rhs = std::nan("");
  r.abs_error = std::nan("");
  r.rel_error = std::nan("");
  r.pass = false;
  r.note = std::move(note);
  return r;
}

const char* report_kind_name(ReportKind kind) { return kind == ReportKind::Equality ? "equality" : "upper_bound"; }

ReportFormat parse_report_format(const std::string& name) {
  if (name == "json") return ReportFormat::Json;
  if (name == "csv") return ReportFormat::Csv;
  if (name == "table") return ReportFormat::Table;
  fail(ErrorCode::InvalidArgument, "unknown report format '" + name + "' (expected json, csv or table)");
}

namespace {

// Non-finite numbers become null in JSON.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double from_number(const json& j) { return j.is_null() ? std::nan("") : j.get<double>(); }

std::string shortest(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string point_text(const std::optional<ChartPoint>& p) {
  if (!p) return "";
  std::string s = std::to_string(p->chart_id) + ":";
  for (std::size_t i = 0; i < p->coords.size(); ++i) {
    if (i) s += ";";
    s += shortest(p->coords[i]);
  }
  return s;
}

json to_json(const VerificationReport& r) {
  json j;
  j["identity"] = r.identity;
  j["model"] = r.model;
  if (r.point) {
    j["point"] = {{"chart_id", r.point->chart_id}, {"coords", r.point->coords}};
  } else {
    j["point"] = nullptr;
  }
  j["lhs"] = number(r.lhs);
  j["rhs"] = number(r.rhs);
  j["abs_error"] = number(r.abs_error);
  j["rel_error"] = number(r.rel_error);
  j["tol"] = number(r.tol);
  j["pass"] = r.pass;
  j["runtime_ms"] = number(r.runtime_ms);
  j["kind"] = report_kind_name(r.kind);
  j["note"] = r.note;
  return j;
}

}  // namespace

std::string report_to_json(const VerificationReport& report) { return to_json(report).dump(); }

VerificationReport report_from_json(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("invalid report JSON: ") + e.what());
  }
  try {
    VerificationReport r;
    r.identity = j.at("identity").get<std::string>();
    r.model = j.at("model").get<std::string>();
    if (!j.at("point").is_null()) {
      r.point = ChartPoint{j["point"].at("chart_id").get<int>(), j["point"].at("coords").get<std::vector<double>>()};
    }
    r.lhs = from_number(j.at("lhs"));
    r.rhs = from_number(j.at("rhs"));
    r.abs_error = from_number(j.at("abs_error"));
    r.rel_error = from_number(j.at("rel_error"));
    r.tol = from_number(j.at("tol"));
    r.pass = j.at("pass").get<bool>();
    r.runtime_ms = from_number(j.at("runtime_ms"));
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "equality") {
      r.kind = ReportKind::Equality;
    } else if (kind == "upper_bound") {
      r.kind = ReportKind::UpperBound;
    } else {
      fail(ErrorCode::ParseError, "unknown report kind '" + kind + "'");
    }
    r.note = j.at("note").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("report JSON does not match the schema: ") + e.what());
  }
}

std::string format_reports(const std::vector<VerificationReport>& reports, ReportFormat format) {
  std::ostringstream out;
  switch (format) {
    case ReportFormat::Json:
      for (const auto& r : reports) out << report_to_json(r) << '\n';
      break;
    case ReportFormat::Csv:
      out << "identity,model,point,lhs,rhs,abs_error,rel_error,tol,pass,runtime_ms,kind,note\n";
      for (const auto& r : reports) {
        out << csv_escape(r.identity) << ',' << csv_escape(r.model) << ',' << csv_escape(point_text(r.point)) << ','
            << shortest(r.lhs) << ',' << shortest(r.rhs) << ',' << shortest(r.abs_error) << ','
            << shortest(r.rel_error) << ',' << shortest(r.tol) << ',' << (r.pass ? "true" : "false") << ','
            << shortest(r.runtime_ms) << ',' << report_kind_name(r.kind) << ',' << csv_escape(r.note) << '\n';
      }
      break;
    case ReportFormat::Table: {
      std::size_t wi = 8, wm = 5;
      for (const auto& r : reports) {
        wi = std::max(wi, r.identity.size());
        wm = std::max(wm, r.model.size());
      }
      char buf[512];
      std::snprintf(buf, sizeof buf, "%-*s  %-*s  %-6s  %22s  %22s  %10s  %10s\n", static_cast<int>(wi), "identity",
                    static_cast<int>(wm), "model", "result", "lhs", "rhs", "abs_error", "tol");
      out << buf;
      for (const auto& r : reports) {
        std::snprintf(buf, sizeof buf, "%-*s  %-*s  %-6s  %22.15g  %22.15g  %10.3e  %10.3e", static_cast<int>(wi),
                      r.identity.c_str(), static_cast<int>(wm), r.model.c_str(), r.pass ? "PASS" : "FAIL", r.lhs,
                      r.rhs, r.abs_error, r.tol);
        out << buf;
        if (!r.note.empty()) out << "  " << r.note;
        out << '\n';
      }
      break;
    }
  }
  return out.str();
}

}  // namespace kverify
