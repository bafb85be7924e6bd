#pragma once

// Named verification suites over a model.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kverify/model.hpp"
#include "kverify/report.hpp"

namespace kverify {

inline constexpr int kDefaultPoints = 10;

struct SuiteOptions {
  // Samples per suite; when empty berger checks the origin once and the others use 10.
  std::optional<int> points;
  std::optional<double> tol;  // per-suite default when empty
  std::uint64_t seed = 0;
  bool timing = true;  // false zeroes runtime_ms for byte-identical output
  int threads = 0;     // 0: KVERIFY_THREADS or hardware concurrency
};

struct SuiteResult {
  std::vector<VerificationReport> reports;
  std::vector<std::string> skipped;  // suites left out of `all`, with the reason

  bool all_pass() const;
};

std::vector<std::string> suite_names();
double default_tolerance(const std::string& suite);

// Throws UnknownSuite for an unknown name. Precondition failures inside a
// suite become failing reports.
SuiteResult run_suite(const ModelManifold& model, const std::string& suite, const SuiteOptions& options);

int thread_count(int requested);

}  // namespace kverify
