#include "kverify/fiber.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>
#include <string>

#include "kverify/error.hpp"

namespace kverify {

double sphere_volume(int n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "sphere dimension must be positive");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

MomentTable::MomentTable(int n) : n_(n), volume_(sphere_volume(n)) {
  if (n < 1 || n > kMaxDimension) fail(ErrorCode::InvalidArgument, "moment table dimension out of range");
  // Monomials of degree up to 4 * kMaxJetOrder (16) cover every fiber polynomial used here.
  constexpr int kMaxHalfDegree = 16;
  odd_double_factorial_.assign(kMaxHalfDegree + 1, 1.0);
  denominator_.assign(kMaxHalfDegree + 1, 1.0);
  for (int k = 1; k <= kMaxHalfDegree; ++k) {
    odd_double_factorial_[static_cast<std::size_t>(k)] = odd_double_factorial_[static_cast<std::size_t>(k - 1)] * (2 * k - 1);
    denominator_[static_cast<std::size_t>(k)] = denominator_[static_cast<std::size_t>(k - 1)] * (n + 2 * k - 2);
  }
}

const MomentTable& MomentTable::get(int n) {
  static std::mutex mutex;
  static std::vector<std::unique_ptr<MomentTable>> tables(kMaxDimension + 1);
  if (n < 1 || n > kMaxDimension) fail(ErrorCode::InvalidArgument, "moment table dimension out of range");
  std::lock_guard lock(mutex);
  auto& slot = tables[static_cast<std::size_t>(n)];
  if (!slot) slot = std::make_unique<MomentTable>(n);
  return *slot;
}

double MomentTable::moment(const Polynomial::Exponent& alpha) const {
  int half = 0;
  double num = volume_;
  for (int i = 0; i < kMaxDimension; ++i) {
    const int a = alpha[static_cast<std::size_t>(i)];
    if (a == 0) continue;
    if (i >= n_ || a % 2 != 0) return 0.0;
    half += a / 2;
    num *= odd_double_factorial_.at(static_cast<std::size_t>(a / 2));
  }
  return num / denominator_.at(static_cast<std::size_t>(half));
}

double monomial_moment(int n, std::span<const int> alpha) {
  if (static_cast<int>(alpha.size()) != n) fail(ErrorCode::InvalidArgument, "multi-index length must equal n");
  Polynomial::Exponent e{};
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] < 0) fail(ErrorCode::InvalidArgument, "negative exponent");
    if (alpha[i] % 2 != 0) return 0.0;
    e[i] = static_cast<std::uint8_t>(alpha[i]);
  }
  return MomentTable::get(n).moment(e);
}

FiberIntegral integrate_fiber(const Polynomial& p) {
  const MomentTable& table = MomentTable::get(p.dimension());
  FiberIntegral out;
  for (const auto& [e, c] : p.terms()) {
    bool odd = false;
    for (auto k : e) odd = odd || (k % 2 != 0);
    if (odd) {
      if (c != 0.0) ++out.odd_terms;
      continue;
    }
    out.value += c * table.moment(e);
  }
  return out;
}

double fiber_average(const Polynomial& p) { return integrate_fiber(p).value / sphere_volume(p.dimension()); }

VerificationReport homogeneous_lap_identity(const Polynomial& f, int r, double tol) {
  if (r < 1) fail(ErrorCode::InvalidArgument, "degree must be at least 1");
  const auto degree = f.homogeneous_degree();
  if (!f.is_zero() && degree != r) {
    fail(ErrorCode::NonHomogeneous, "polynomial is not homogeneous of degree " + std::to_string(r));
  }
  const int n = f.dimension();
  const double lhs = integrate_fiber(f.laplacian()).value;
  const double rhs = r * (n + r - 2) * integrate_fiber(f).value;
  auto report = make_report("prop31.laplacian_integral", "", std::nullopt, lhs, rhs, tol);
  report.note = "r=" + std::to_string(r) + " n=" + std::to_string(n);
  return report;
}

FiberMaximum fiber_max_H(const QuarticForm& form, int restarts, std::uint64_t seed) {
  if (restarts < 1) fail(ErrorCode::InvalidArgument, "restarts must be at least 1");
  const int n = form.dimension();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  double frob = 0.0;
  for (double w : form.W.values()) frob += w * w;
  frob = std::sqrt(frob);
  // 12 |W| bounds the Hessian of F on the unit ball, so this step never overshoots.
  const double base_step = 1.0 / (12.0 * frob + 1e-300);
  FiberMaximum best{-std::numeric_limits<double>::infinity(), Vector()};
  for (int k = 0; k < restarts; ++k) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = normal(rng);
    v.normalize();
    double f = form.evaluate(v);
    double step = base_step;
    bool converged = frob == 0.0;
    for (int iter = 0; iter < 10000 && !converged; ++iter) {
      Vector g = form.gradient(v);
      g -= g.dot(v) * v;
      if (g.norm() < 1e-10) {
        converged = true;
        break;
      }
      while (true) {
        Vector trial = (v + step * g).normalized();
        const double ft = form.evaluate(trial);
        if (ft >= f - 1e-14 * (1.0 + std::abs(f))) {
          v = trial;
          f = ft;
          break;
        }
        step *= 0.5;
        if (step < 1e-12 * base_step) fail(ErrorCode::NonConvergence, "fiber ascent step underflow");
      }
    }
    if (!converged) fail(ErrorCode::NonConvergence, "fiber ascent hit the iteration cap");
    if (f > best.value) best = {f, v};
  }
  return best;
}

std::optional<double> kahler_einstein_constant(const ModelManifold& model) {
  if (!model.has_complex_structure()) return std::nullopt;
  double lambda = 0.0;
  try {
    lambda = einstein_constant(model);
  } catch (const NotEinsteinError&) {
    return std::nullopt;
  }
  std::mt19937_64 rng(99);
  for (int k = 0; k < 3; ++k) {
    if (PointGeometry(model, model.sample_point(rng), 0).nabla_j().max_abs() > 1e-8) return std::nullopt;
  }
  return lambda;
}

FiberStats fiber_stats(const PointGeometry& geo, std::optional<double> lambda) {
  const CurvatureData& curv = geo.curvature();
  const Matrix& j = geo.complex_structure();
  const int n = curv.dimension;
  const QuarticForm form = quartic_form(curv, j);
  const Polynomial f = form.polynomial();
  FiberStats s;
  s.h_av = fiber_average(f);
  const Polynomial centered = f - s.h_av * Polynomial::norm_power(n, 2);
  s.variance = fiber_average(centered * centered);
  s.gradv_sq_integral = fiber_average(gradv_sq_polynomial(curv, j));
  s.h_max = fiber_max_H(form).value;
  if (lambda) {
    s.einstein_constant = lambda;
    s.h_av_expected = 4.0 * *lambda / (n + 2);
    // D F is a quadratic form; compare its matrix with 16 Lambda I.
    const Polynomial lap = f.laplacian();
    Matrix q = Matrix::Zero(n, n);
    for (const auto& [e, c] : lap.terms()) {
      std::vector<int> idx;
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < e[static_cast<std::size_t>(i)]; ++k) idx.push_back(i);
      if (idx.size() != 2) continue;
      if (idx[0] == idx[1]) {
        q(idx[0], idx[0]) += c;
      } else {
        q(idx[0], idx[1]) += 0.5 * c;
        q(idx[1], idx[0]) += 0.5 * c;
      }
    }
    s.lap_deviation = (q - 16.0 * *lambda * Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  }
  return s;
}

FiberStats h_stats(const ModelManifold& model, const ChartPoint& point) {
  if (!model.has_complex_structure()) fail(ErrorCode::InvalidArgument, "model carries no almost complex structure");
  return fiber_stats(PointGeometry(model, point, 0), kahler_einstein_constant(model));
}

VerificationReport berger_check(const ModelManifold& model, const ChartPoint& point, double tol) {
  if (!model.has_complex_structure()) fail(ErrorCode::InvalidArgument, "model carries no almost complex structure");
  const PointGeometry geo(model, point, 0);
  const CurvatureData& curv = geo.curvature();
  const Matrix& j = geo.complex_structure();
  const int n = curv.dimension;
  const double nn = 0.5 * n;
  const double h_av = fiber_average(quartic_form(curv, j).polynomial());
  const StarCurvature star = star_curvature(curv, j);
  const double general = (3.0 * star.star_scalar + curv.scalar) / (4.0 * nn * (nn + 1.0));
  // Decided per model: nabla J can vanish at isolated points of a non-Kahler metric.
  const bool kahler = model.metadata().kahler;
  char note[256];
  if (kahler) {
    const double classical = curv.scalar / (nn * (nn + 1.0));
    auto r = make_report("berger.fiber_average", model.name(), point, h_av, classical, tol);
    const auto other = make_report("", "", std::nullopt, h_av, general, tol);
    r.pass = r.pass && other.pass;
    std::snprintf(note, sizeof note, "kahler; s=%.12g s*=%.12g (3s*+s)/(4N(N+1))=%.15g", curv.scalar,
                  star.star_scalar, general);
    r.note = note;
    return r;
  }
  auto r = make_report("berger.fiber_average", model.name(), point, h_av, general, tol);
  std::snprintf(note, sizeof note, "non-kahler; s=%.12g s*=%.12g |s*-s|=%.3e", curv.scalar, star.star_scalar,
                std::abs(star.star_scalar - curv.scalar));
  r.note = note;
  return r;
}

std::vector<VerificationReport> variance_identity_check(const ModelManifold& model, const ChartPoint& point,
                                                        double tol) {
  if (!model.has_complex_structure()) fail(ErrorCode::InvalidArgument, "model carries no almost complex structure");
  const auto lambda = kahler_einstein_constant(model);
  if (!lambda) fail(ErrorCode::NotEinstein, model.name() + " is not Kahler-Einstein");
  const int n = model.dimension();
  const FiberStats s = fiber_stats(PointGeometry(model, point, 0), lambda);
  std::vector<VerificationReport> out;
  out.push_back(make_report("variance.identity", model.name(), point, s.variance,
                            s.gradv_sq_integral / (4.0 * (n + 2)), tol));
  out.push_back(make_report("variance.h_average", model.name(), point, s.h_av, *s.h_av_expected, tol));
  auto lap = make_report("variance.ambient_laplacian", model.name(), point, 16.0 * *lambda + *s.lap_deviation,
                         16.0 * *lambda, tol);
  lap.note = "lhs is 16 Lambda plus the largest deviation of D H from 16 Lambda |v|^2";
  out.push_back(lap);
  return out;
}

std::vector<double> require_homogeneous(const ModelManifold& model,
                                        const std::function<std::vector<double>(const ChartPoint&)>& values,
                                        int count, double tol, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x5bd1e995ULL);
  std::vector<double> first = values(model.origin());
  for (int k = 1; k < count; ++k) {
    const auto v = values(model.sample_point(rng));
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double spread = std::abs(v[i] - first[i]);
      if (spread > tol * std::max(1.0, std::abs(first[i]))) {
        fail(ErrorCode::NonHomogeneous, model.name() + ": fiber quantities vary between points (spread " +
                                            std::to_string(spread) + ")");
      }
    }
  }
  return first;
}

Polynomial vertical_curvature_polynomial(const CurvatureData& curv, const Matrix& j) {
  const int n = curv.dimension;
  const auto q = holomorphic_gradient_polynomials(curv, j);
  const Polynomial f = quartic_form(curv, j).polynomial();
  std::vector<Polynomial> g;
  for (int a = 0; a < n; ++a) g.push_back(4.0 * (q[static_cast<std::size_t>(a)] - f * Polynomial::variable(n, a)));
  const auto h = fiber_curvature_polynomials(curv);
  Polynomial out(n);
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      const Polynomial& hab = h[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      if (hab.is_zero()) continue;
      const double w = a == b ? 1.0 : 2.0;
      out += w * (hab * (g[static_cast<std::size_t>(a)] * g[static_cast<std::size_t>(b)]));
    }
  }
  return out;
}

RayleighData rayleigh_data(const ModelManifold& model, std::uint64_t seed) {
  if (!model.has_complex_structure()) fail(ErrorCode::InvalidArgument, "model carries no almost complex structure");
  if (!kahler_einstein_constant(model)) {
    fail(ErrorCode::NotEinstein, model.name() + " is not Kahler-Einstein");
  }
  const int n = model.dimension();
  {
    const PointGeometry geo(model, model.origin(), 0);
    const FiberStats s = fiber_stats(geo, std::nullopt);
    if (s.variance <= 1e-14 * std::max(1.0, s.h_av * s.h_av)) {
      fail(ErrorCode::ConstantH, model.name() + ": H is constant on the fibers (complex space form)");
    }
  }
  RayleighData d;
  d.max_abs_sec = max_abs_sec(model, 64, seed);
  if (std::abs(d.max_abs_sec - 1.0) > 1e-4) {
    fail(ErrorCode::NotNormalized, model.name() + ": max |sec| = " + std::to_string(d.max_abs_sec) + ", expected 1");
  }
  const auto values = require_homogeneous(
      model,
      [&](const ChartPoint& p) {
        const PointGeometry geo(model, p, 1);
        const CurvatureData& curv = geo.curvature();
        const Matrix& j = geo.complex_structure();
        Polynomial gh(n);
        for (const auto& c : gradh_polynomials(curv, j, geo.nabla_j())) gh += c * c;
        const Polynomial f = quartic_form(curv, j).polynomial();
        const double h_av = fiber_average(f);
        const Polynomial centered = f - h_av * Polynomial::norm_power(n, 2);
        return std::vector<double>{fiber_average(gh), fiber_average(gradv_sq_polynomial(curv, j)),
                                   fiber_average(centered * centered),
                                   fiber_average(vertical_curvature_polynomial(curv, j))};
      },
      5, 1e-8, seed);
  d.horizontal = values[0];
  d.vertical = values[1];
  d.variance = values[2];
  d.curvature_term = values[3];
  d.quotient = (d.horizontal + d.vertical) / d.variance;
  return d;
}

std::vector<VerificationReport> rayleigh_check(const ModelManifold& model, double tol, std::uint64_t seed) {
  const RayleighData d = rayleigh_data(model, seed);
  const int n = model.dimension();
  std::vector<VerificationReport> out;
  auto q = make_report("rayleigh.quotient", model.name(), std::nullopt, d.quotient, 6.0 * (n + 2), tol,
                       ReportKind::UpperBound);
  q.note = "4(n+2)=" + std::to_string(4 * (n + 2));
  out.push_back(q);
  out.push_back(make_report("rayleigh.step_a", model.name(), std::nullopt, d.horizontal,
                            0.5 * d.max_abs_sec * d.vertical, tol, ReportKind::UpperBound));
  out.push_back(
      make_report("rayleigh.step_b", model.name(), std::nullopt, d.variance, d.vertical / (4.0 * (n + 2)), tol));
  auto sec = make_report("rayleigh.curvature_term", model.name(), std::nullopt, 2.0 * d.horizontal,
                         -d.curvature_term, tol);
  sec.note = "2 int |grad^h H|^2 against -int R(x,G,x,G) = -int sec(x,G)|G|^2";
  out.push_back(sec);
  return out;
}

std::vector<VerificationReport> theorem4_ratio(const ModelManifold& model, const std::vector<ChartPoint>& points,
                                               double tol) {
  if (model.dimension() != 4) fail(ErrorCode::InvalidArgument, "the H_av / H_max ratio check needs a surface (n = 4)");
  if (!model.has_complex_structure()) fail(ErrorCode::InvalidArgument, "model carries no almost complex structure");
  std::vector<VerificationReport> out;
  for (const auto& p : points) {
    const PointGeometry geo(model, p, 0);
    const QuarticForm form = quartic_form(geo.curvature(), geo.complex_structure());
    const double h_max = fiber_max_H(form).value;
    if (!(h_max > 1e-12)) {
      fail(ErrorCode::DegenerateRatio, model.name() + ": H_max = " + std::to_string(h_max) + ", ratio undefined");
    }
    const double h_av = fiber_average(form.polynomial());
    auto r = make_report("theorem4.ratio", model.name(), p, h_av / h_max, 2.0 / 3.0, tol);
    char note[128];
    std::snprintf(note, sizeof note, "H_av=%.15g H_max=%.15g", h_av, h_max);
    r.note = note;
    out.push_back(r);
  }
  return out;
}

}  // namespace kverify
