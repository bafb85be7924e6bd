#include "kverify/suites.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <random>
#include <thread>

#include "kverify/error.hpp"
#include "kverify/fiber.hpp"
#include "kverify/gray.hpp"

namespace kverify {

namespace {

using Clock = std::chrono::steady_clock;
using Task = std::function<std::vector<VerificationReport>()>;

const std::vector<std::pair<std::string, double>>& tolerances() {
  static const std::vector<std::pair<std::string, double>> t = {
      {"prop31", 1e-9},  {"berger", 1e-8},  {"variance", 1e-8}, {"theorem4", 1e-6}, {"rayleigh", 1e-8},
      {"surface", 1e-8}, {"gray-L", 1e-6}, {"lemma23", 1e-6},
  };
  return t;
}

std::string error_note(const Error& e) { return std::string(error_code_name(e.code())) + ": " + e.what(); }

// Runs tasks on a small pool; results keep task order.
std::vector<VerificationReport> run_tasks(const std::vector<Task>& tasks, const std::string& identity,
                                          const std::string& model, const SuiteOptions& opt) {
  std::vector<std::vector<VerificationReport>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const auto start = Clock::now();
      try {
        results[i] = tasks[i]();
      } catch (const Error& e) {
        results[i] = {failed_report(identity, model, error_note(e))};
      } catch (const std::exception& e) {
        results[i] = {failed_report(identity, model, std::string("Internal: ") + e.what())};
      }
      const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
      for (auto& r : results[i]) r.runtime_ms = opt.timing ? ms : 0.0;
    }
  };
  const int n = std::min<int>(thread_count(opt.threads), static_cast<int>(tasks.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  std::vector<VerificationReport> out;
  for (auto& r : results) out.insert(out.end(), r.begin(), r.end());
  return out;
}

std::vector<ChartPoint> sample_points(const ModelManifold& model, int count, std::mt19937_64& rng) {
  std::vector<ChartPoint> pts;
  for (int k = 0; k < count; ++k) pts.push_back(model.sample_point(rng));
  return pts;
}

std::vector<UnitTangent> sample_tangents(const ModelManifold& model, int count, std::mt19937_64& rng) {
  std::vector<UnitTangent> out;
  for (int k = 0; k < count; ++k) out.push_back(sample_unit_tangent(model, rng));
  return out;
}

Polynomial random_homogeneous(int n, int degree, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Polynomial p(n);
  Polynomial::Exponent e{};
  // Enumerate exponents of total degree `degree` in n variables.
  std::function<void(int, int)> rec = [&](int var, int left) {
    if (var == n - 1) {
      e[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(left);
      p.add_term(e, normal(rng));
      return;
    }
    for (int k = left; k >= 0; --k) {
      e[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(k);
      rec(var + 1, left - k);
    }
  };
  rec(0, degree);
  return p;
}

void require_complex(const ModelManifold& model) {
  if (!model.has_complex_structure()) fail(ErrorCode::InvalidArgument, model.name() + " carries no almost complex structure");
}

std::vector<VerificationReport> run_one(const ModelManifold& model, const std::string& suite, const SuiteOptions& opt,
                                        double tol) {
  std::mt19937_64 rng(opt.seed);
  const std::string& name = model.name();
  const int points = opt.points.value_or(kDefaultPoints);
  std::vector<Task> tasks;
  if (suite == "berger") {
    require_complex(model);
    // Without an explicit count the identity is checked once, at the origin.
    const auto pts = opt.points ? sample_points(model, *opt.points, rng) : std::vector{model.origin()};
    for (const auto& p : pts) {
      tasks.push_back([&model, p, tol] { return std::vector{berger_check(model, p, tol)}; });
    }
  } else if (suite == "prop31") {
    if (model.has_complex_structure()) {
      for (const auto& p : sample_points(model, points, rng)) {
        tasks.push_back([&model, p, tol] {
          const PointGeometry geo(model, p, 0);
          auto r = homogeneous_lap_identity(quartic_form(geo.curvature(), geo.complex_structure()).polynomial(), 4, tol);
          r.identity = "prop31.quartic_form";
          r.model = model.name();
          r.point = p;
          return std::vector{r};
        });
      }
    }
    const int n = model.dimension();
    for (int k = 0; k < points; ++k) {
      const int degree = 1 + k % 6;
      const Polynomial f = random_homogeneous(n, degree, rng);
      tasks.push_back([f, degree, tol, name] {
        auto r = homogeneous_lap_identity(f, degree, tol);
        r.identity = "prop31.random_polynomial";
        r.model = name;
        return std::vector{r};
      });
    }
  } else if (suite == "variance") {
    require_complex(model);
    for (const auto& p : sample_points(model, points, rng)) {
      tasks.push_back([&model, p, tol] { return variance_identity_check(model, p, tol); });
    }
  } else if (suite == "theorem4") {
    for (const auto& p : sample_points(model, points, rng)) {
      tasks.push_back([&model, p, tol] { return theorem4_ratio(model, {p}, tol); });
    }
  } else if (suite == "rayleigh") {
    const std::uint64_t seed = opt.seed;
    tasks.push_back([&model, tol, seed] { return rayleigh_check(model, tol, seed); });
  } else if (suite == "surface") {
    for (const auto& ut : sample_tangents(model, points, rng)) {
      const std::uint64_t seed = rng();
      tasks.push_back([&model, ut, tol, seed] { return surface_identities(model, ut, tol, seed); });
    }
  } else if (suite == "gray-L") {
    require_complex(model);
    einstein_constant(model);
    for (const auto& ut : sample_tangents(model, points, rng)) {
      tasks.push_back([&model, ut, tol] {
        const PointGeometry geo(model, ut.base, 2);
        return std::vector{make_report("gray.L_of_H", model.name(), ut.base, L_apply_H(geo, ut.x), 0.0, tol)};
      });
    }
  } else if (suite == "lemma23") {
    require_complex(model);
    einstein_constant(model);
    for (const auto& ut : sample_tangents(model, points, rng)) {
      tasks.push_back([&model, ut, tol] {
        const PointGeometry geo(model, ut.base, 2);
        return std::vector{lemma23_check(geo, ut.x, model.name(), tol)};
      });
    }
    const std::uint64_t seed = opt.seed;
    tasks.push_back([&model, tol, seed] { return std::vector{lemma23_integral_check(model, tol, seed)}; });
  } else {
    fail(ErrorCode::UnknownSuite, "unknown suite '" + suite + "'");
  }
  return run_tasks(tasks, suite, name, opt);
}

// Why `suite` does not apply to the model inside `all`, or empty.
std::optional<std::string> skip_reason(const ModelManifold& model, const std::string& suite,
                                       const std::optional<double>& ke, bool constant_h) {
  if (suite == "prop31") return std::nullopt;
  if (!model.has_complex_structure()) return "no almost complex structure";
  if (suite == "berger") return std::nullopt;
  if (!ke) return "not Kahler-Einstein";
  if (suite == "variance" || suite == "gray-L") return std::nullopt;
  if (suite == "lemma23") return model.metadata().homogeneous ? std::nullopt
                                                              : std::optional<std::string>("not homogeneous");
  if (suite == "surface") return model.dimension() == 4 ? std::nullopt : std::optional<std::string>("not a surface");
  if (constant_h) return "H is constant on the fibers";
  if (suite == "theorem4") {
    if (model.dimension() != 4) return "not a surface";
    if (!(*ke > 0.0)) return "Einstein constant is not positive";
    return std::nullopt;
  }
  if (suite == "rayleigh") {
    if (!model.metadata().homogeneous) return "not homogeneous";
    if (std::abs(max_abs_sec(model) - 1.0) > 1e-4) return "not normalized";
    return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

bool SuiteResult::all_pass() const {
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });
}

std::vector<std::string> suite_names() {
  return {"prop31", "berger", "variance", "theorem4", "rayleigh", "surface", "gray-L", "lemma23", "all"};
}

double default_tolerance(const std::string& suite) {
  for (const auto& [name, tol] : tolerances()) {
    if (name == suite) return tol;
  }
  fail(ErrorCode::UnknownSuite, "unknown suite '" + suite + "'");
}

int thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("KVERIFY_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SuiteResult run_suite(const ModelManifold& model, const std::string& suite, const SuiteOptions& options) {
  if (options.points && *options.points < 1) fail(ErrorCode::InvalidArgument, "--points must be at least 1");
  SuiteResult result;
  auto run_guarded = [&](const std::string& s) {
    const double tol = options.tol.value_or(default_tolerance(s));
    try {
      auto reports = run_one(model, s, options, tol);
      result.reports.insert(result.reports.end(), reports.begin(), reports.end());
    } catch (const Error& e) {
      if (e.code() == ErrorCode::UnknownSuite) throw;
      auto r = failed_report(s, model.name(), error_note(e));
      r.tol = tol;
      result.reports.push_back(r);
    }
  };
  if (suite != "all") {
    default_tolerance(suite);
    run_guarded(suite);
    return result;
  }
  const auto ke = kahler_einstein_constant(model);
  bool constant_h = false;
  if (model.has_complex_structure()) {
    const PointGeometry geo(model, model.origin(), 0);
    const FiberStats s = fiber_stats(geo, std::nullopt);
    constant_h = s.variance <= 1e-14 * std::max(1.0, s.h_av * s.h_av);
  }
  for (const auto& s : suite_names()) {
    if (s == "all") continue;
    if (const auto why = skip_reason(model, s, ke, constant_h)) {
      result.skipped.push_back(s + ": " + *why);
      continue;
    }
    run_guarded(s);
  }
  return result;
}

}  // namespace kverify
