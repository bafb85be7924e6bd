#pragma once

// Verification reports and their serializations.

#include <optional>
#include <string>
#include <vector>

#include "kverify/model.hpp"

namespace kverify {

enum class ReportKind {
  Equality,    // pass iff abs_error <= tol or rel_error <= tol
  UpperBound,  // pass iff lhs <= rhs + tol * max(1, |rhs|)
};

struct VerificationReport {
  std::string identity;
  std::string model;
  std::optional<ChartPoint> point;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_error = 0.0;
  double rel_error = 0.0;
  double tol = 0.0;
  bool pass = false;
  double runtime_ms = 0.0;
  ReportKind kind = ReportKind::Equality;
  std::string note;
};

VerificationReport make_report(std::string identity, std::string model, std::optional<ChartPoint> point, double lhs,
                               double rhs, double tol, ReportKind kind = ReportKind::Equality);

// A failing report carrying an error diagnostic instead of values.
VerificationReport failed_report(std::string identity, std::string model, std::string note);

const char* report_kind_name(ReportKind kind);

enum class ReportFormat { Json, Csv, Table };

ReportFormat parse_report_format(const std::string& name);

// JSON: one object per line. CSV: header plus one row per report. Table: aligned text.
std::string format_reports(const std::vector<VerificationReport>& reports, ReportFormat format);
std::string report_to_json(const VerificationReport& report);
VerificationReport report_from_json(const std::string& line);

}  // namespace kverify
