#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "kverify/error.hpp"
#include "kverify/fiber.hpp"
#include "kverify/model.hpp"
#include "oracles.hpp"

using namespace kverify;
using std::numbers::pi;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

Polynomial::Exponent exponent(std::initializer_list<int> a) {
  Polynomial::Exponent e{};
  std::size_t i = 0;
  for (int v : a) e[i++] = static_cast<std::uint8_t>(v);
  return e;
}

Polynomial monomial(int n, std::initializer_list<int> a, double c = 1.0) {
  Polynomial p(n);
  p.add_term(exponent(a), c);
  return p;
}

// Even exponent patterns with total degree <= 8, one per partition.
std::vector<std::vector<int>> even_patterns(int n) {
  const std::vector<std::vector<int>> halves = {{},        {1},    {2},       {1, 1},    {3},    {2, 1},
                                                {1, 1, 1}, {4},    {3, 1},    {2, 2},    {2, 1, 1}, {1, 1, 1, 1}};
  std::vector<std::vector<int>> out;
  for (const auto& h : halves) {
    if (static_cast<int>(h.size()) > n) continue;
    std::vector<int> a(static_cast<std::size_t>(n), 0);
    for (std::size_t i = 0; i < h.size(); ++i) a[i] = 2 * h[i];
    out.push_back(a);
  }
  return out;
}

Polynomial random_homogeneous(int n, int r, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Polynomial p(n);
  std::function<void(int, int, Polynomial::Exponent&)> rec = [&](int var, int left, Polynomial::Exponent& e) {
    if (var == n - 1) {
      e[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(left);
      p.add_term(e, normal(rng));
      return;
    }
    for (int k = 0; k <= left; ++k) {
      e[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(k);
      rec(var + 1, left - k, e);
    }
  };
  Polynomial::Exponent e{};
  rec(0, r, e);
  return p;
}

}  // namespace

TEST_CASE("sphere volumes and monomial moments") {
  CHECK(sphere_volume(2) == doctest::Approx(2 * pi));
  CHECK(sphere_volume(3) == doctest::Approx(4 * pi));
  CHECK(sphere_volume(4) == doctest::Approx(2 * pi * pi));
  const std::vector<int> odd{1, 1, 0, 0};
  const std::vector<int> a2{2, 0, 0, 0};
  const std::vector<int> a22{2, 2, 0, 0};
  const std::vector<int> zero{0, 0, 0, 0};
  CHECK(monomial_moment(4, odd) == 0.0);
  CHECK(monomial_moment(4, a2) == doctest::Approx(pi * pi / 2));
  CHECK(monomial_moment(4, a22) == doctest::Approx(pi * pi / 12));
  CHECK(monomial_moment(4, zero) == doctest::Approx(2 * pi * pi));
  CHECK(MomentTable::get(4).moment(exponent({2, 2})) == doctest::Approx(pi * pi / 12));
  CHECK(&MomentTable::get(6) == &MomentTable::get(6));
}

TEST_CASE("monomial moments agree with Monte Carlo estimates") {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> normal;
  const int samples = 1000000;
  for (int n : {2, 4, 6, 8}) {
    const auto patterns = even_patterns(n);
    std::vector<double> sum(patterns.size(), 0.0), sum2(patterns.size(), 0.0);
    double odd_sum = 0.0;
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int s = 0; s < samples; ++s) {
      double r2 = 0.0;
      for (double& x : v) {
        x = normal(rng);
        r2 += x * x;
      }
      const double inv = 1.0 / std::sqrt(r2);
      for (double& x : v) x *= inv;
      for (std::size_t k = 0; k < patterns.size(); ++k) {
        double m = 1.0;
        for (std::size_t i = 0; i < v.size(); ++i) m *= std::pow(v[i], patterns[k][i]);
        sum[k] += m;
        sum2[k] += m * m;
      }
      odd_sum += v[0] * v[1] * v[1];
    }
    const double vol = sphere_volume(n);
    for (std::size_t k = 0; k < patterns.size(); ++k) {
      const double mean = sum[k] / samples;
      const double se = std::sqrt(std::max(sum2[k] / samples - mean * mean, 0.0) / samples);
      const double exact = monomial_moment(n, patterns[k]) / vol;
      CAPTURE(n);
      CAPTURE(k);
      CHECK(std::abs(mean - exact) <= 4 * se + 1e-15);
    }
    std::vector<int> odd(static_cast<std::size_t>(n), 0);
    odd[0] = 1;
    odd[1] = 2;
    CHECK(monomial_moment(n, odd) == 0.0);
    CHECK(std::abs(odd_sum / samples) < 5e-3);
  }
}

TEST_CASE("fiber integrals of constants and curvature quartics") {
  CHECK(integrate_fiber(Polynomial::constant(4, 1.0)).value == doctest::Approx(2 * pi * pi));
  const auto cp2 = make_catalog_model("cp2");
  const PointGeometry g2(cp2, ChartPoint{0, {0.2, 0.1, -0.3, 0.1}}, 0);
  CHECK(integrate_fiber(quartic_form(g2.curvature(), g2.complex_structure()).polynomial()).value ==
        doctest::Approx(2 * pi * pi).epsilon(1e-12));

  const auto prod = make_catalog_model("cp1xcp1");
  const PointGeometry gp(prod, prod.origin(), 0);
  const double exact = integrate_fiber(quartic_form(gp.curvature(), gp.complex_structure()).polynomial()).value;
  CHECK(exact == doctest::Approx(2.0 / 3.0 * 2 * pi * pi).epsilon(1e-12));
  // Independent estimate: t = |v^(1)|^2 is uniform on [0, 1] for v uniform on S^3.
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double s = 0.0;
  const int samples = 200000;
  for (int k = 0; k < samples; ++k) {
    const double t = u(rng);
    s += t * t + (1 - t) * (1 - t);
  }
  CHECK(std::abs(s / samples - exact / sphere_volume(4)) < 3e-3);

  Polynomial odd = monomial(4, {1, 0, 0, 0}) + monomial(4, {2, 0, 0, 0});
  const FiberIntegral fi = integrate_fiber(odd);
  CHECK(fi.odd_terms == 1);
  CHECK(fi.value == doctest::Approx(pi * pi / 2));
}

TEST_CASE("fiber integration is linear and rotation invariant") {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> normal;
  for (int n : {4, 6}) {
    Tensor t(n, 4);
    for (std::size_t i = 0; i < t.values().size(); ++i) t.data()[i] = normal(rng);
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
    const Matrix q = Eigen::HouseholderQR<Matrix>(a).householderQ();
    const Polynomial p = Polynomial::from_tensor(t);
    const Polynomial rotated = Polynomial::from_tensor(t.change_basis(q));
    CHECK(integrate_fiber(rotated).value == doctest::Approx(integrate_fiber(p).value).epsilon(1e-9));
    const Polynomial r = random_homogeneous(n, 2, rng);
    CHECK(integrate_fiber(2.5 * p + r).value ==
          doctest::Approx(2.5 * integrate_fiber(p).value + integrate_fiber(r).value).epsilon(1e-12));
  }
}

TEST_CASE("homogeneous Laplacian identity") {
  const auto r1 = homogeneous_lap_identity(monomial(5, {1, 0, 0, 0, 0}), 1, 1e-9);
  CHECK(r1.lhs == 0.0);
  CHECK(r1.rhs == 0.0);
  CHECK(r1.pass);
  const auto r4 = homogeneous_lap_identity(monomial(4, {4, 0, 0, 0}), 4, 1e-9);
  CHECK(r4.lhs == doctest::Approx(6 * pi * pi));
  CHECK(r4.rhs == doctest::Approx(6 * pi * pi));
  CHECK(r4.pass);
  std::mt19937_64 rng(6);
  for (int n : {2, 4, 6}) {
    for (int r = 1; r <= 6; ++r) {
      for (int k = 0; k < 5; ++k) {
        const auto rep = homogeneous_lap_identity(random_homogeneous(n, r, rng), r, 1e-9);
        CHECK(rep.pass);
      }
    }
  }
  CHECK(code_of([] { homogeneous_lap_identity(monomial(4, {2}) + monomial(4, {0, 1}), 2, 1e-9); }) ==
        ErrorCode::NonHomogeneous);
}

TEST_CASE("fiber maximum of H") {
  const auto torus = make_catalog_model("torus4");
  const PointGeometry gt(torus, torus.origin(), 0);
  CHECK(fiber_max_H(quartic_form(gt.curvature(), gt.complex_structure())).value == 0.0);
  const auto cp2 = make_catalog_model("cp2");
  const PointGeometry g2(cp2, cp2.origin(), 0);
  CHECK(fiber_max_H(quartic_form(g2.curvature(), g2.complex_structure())).value ==
        doctest::Approx(1.0).epsilon(1e-12));
  const auto conf = make_catalog_model("conformal_cp1xcp1");
  const PointGeometry gc(conf, ChartPoint{0, {0.1, 0.05, -0.1, 0.2}}, 0);
  const QuarticForm form = quartic_form(gc.curvature(), gc.complex_structure());
  const FiberMaximum best = fiber_max_H(form, 64);
  CHECK(best.value >= fiber_max_H(form, 1).value - 1e-12);
  CHECK(best.value >= fiber_max_H(form, 8).value - 1e-12);
  // Dense random sampling never beats the optimizer.
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20000; ++k) CHECK(form.evaluate(oracle::random_unit(4, rng)) <= best.value + 1e-12);
  CHECK(best.argmax.norm() == doctest::Approx(1.0));
}

TEST_CASE("H statistics") {
  const auto cp2 = make_catalog_model("cp2");
  const auto s2 = h_stats(cp2, ChartPoint{0, {0.3, 0.1, 0.0, -0.2}});
  CHECK(s2.h_av == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(s2.variance) < 1e-14);
  CHECK(s2.h_max == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s2.einstein_constant.value() == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(s2.lap_deviation.value() < 1e-9);

  const auto prod = make_catalog_model("cp1xcp1");
  const auto sp = h_stats(prod, ChartPoint{0, {0.3, 0.1, 0.0, -0.2}});
  CHECK(sp.h_av == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(sp.variance == doctest::Approx(1.0 / 45.0).epsilon(1e-12));
  CHECK(sp.gradv_sq_integral == doctest::Approx(8.0 / 15.0).epsilon(1e-12));
  CHECK(sp.h_max == doctest::Approx(1.0).epsilon(1e-12));

  std::mt19937_64 rng(10);
  for (const auto& name : catalog_names()) {
    const auto m = make_catalog_model(name);
    if (!m.has_complex_structure()) continue;
    const auto s = h_stats(m, m.sample_point(rng));
    CHECK(s.variance >= -1e-15);
    CHECK(s.h_max >= s.h_av - 1e-12);
    if (s.einstein_constant) {
      const int n = m.dimension();
      CHECK(std::abs(s.h_av - 4 * *s.einstein_constant / (n + 2)) < 1e-9);
      CHECK(*s.lap_deviation < 1e-9);
    }
  }
  const auto conf = make_catalog_model("conformal_cp1xcp1");
  CHECK_FALSE(h_stats(conf, conf.origin()).einstein_constant.has_value());
}

TEST_CASE("Berger averages") {
  const auto cp2 = make_catalog_model("cp2");
  const auto r = berger_check(cp2, cp2.origin(), 1e-9);
  CHECK(r.lhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.rhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.pass);
  const auto prod = make_catalog_model("cp1xcp1");
  const auto rp = berger_check(prod, prod.origin(), 1e-9);
  CHECK(rp.rhs == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(rp.pass);

  const auto conf = make_catalog_model("conformal_cp1xcp1");
  std::mt19937_64 rng(12);
  for (int k = 0; k < 20; ++k) {
    const ChartPoint p = conf.sample_point(rng);
    const PointGeometry geo(conf, p, 0);
    const auto star = star_curvature(geo.curvature(), geo.complex_structure());
    const auto rep = berger_check(conf, p, 1e-8);
    CHECK(rep.pass);
    CHECK(rep.rhs == doctest::Approx((3 * star.star_scalar + geo.curvature().scalar) / 24.0).epsilon(1e-12));
  }
}

TEST_CASE("variance identity") {
  for (const char* name : {"cp2", "cp1xcp1", "ch2"}) {
    const auto m = make_catalog_model(name);
    for (const auto& r : variance_identity_check(m, m.origin(), 1e-9)) {
      CAPTURE(r.identity);
      CHECK(r.pass);
    }
  }
  const auto prod = make_catalog_model("cp1xcp1");
  const auto reps = variance_identity_check(prod, prod.origin(), 1e-9);
  CHECK(reps[0].lhs == doctest::Approx(1.0 / 45.0));
  CHECK(reps[0].rhs == doctest::Approx((1.0 / 24.0) * (8.0 / 15.0)));
  const auto conf = make_catalog_model("conformal_cp1xcp1");
  CHECK(code_of([&] { variance_identity_check(conf, conf.origin(), 1e-9); }) == ErrorCode::NotEinstein);
}

TEST_CASE("Rayleigh quotient") {
  const auto prod = make_catalog_model("cp1xcp1");
  const RayleighData d = rayleigh_data(prod);
  CHECK(d.quotient == doctest::Approx(24.0).epsilon(1e-8));
  CHECK(std::abs(d.horizontal) < 1e-12);
  for (const auto& r : rayleigh_check(prod, 1e-8)) {
    CAPTURE(r.identity);
    CHECK(r.pass);
  }
  CHECK(code_of([] { rayleigh_data(make_catalog_model("cp2")); }) == ErrorCode::ConstantH);
  CHECK(code_of([] { rayleigh_data(make_catalog_model("cp1xcp1_c2")); }) == ErrorCode::NotNormalized);
  CHECK(code_of([] { rayleigh_data(make_catalog_model("conformal_cp1xcp1")); }) == ErrorCode::NotEinstein);
}

TEST_CASE("H_av / H_max ratio") {
  std::mt19937_64 rng(4);
  const auto prod = make_catalog_model("cp1xcp1");
  std::vector<ChartPoint> pts;
  for (int k = 0; k < 5; ++k) pts.push_back(prod.sample_point(rng));
  for (const auto& r : theorem4_ratio(prod, pts, 1e-6)) {
    CHECK(r.lhs == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
    CHECK(r.pass);
  }
  const auto cp2 = make_catalog_model("cp2");
  const auto r2 = theorem4_ratio(cp2, {cp2.origin()}, 1e-6);
  CHECK(r2[0].lhs == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_FALSE(r2[0].pass);
  const auto torus = make_catalog_model("torus4");
  CHECK(code_of([&] { theorem4_ratio(torus, {torus.origin()}, 1e-6); }) == ErrorCode::DegenerateRatio);
}

TEST_CASE("homogeneity gate") {
  const auto conf = make_catalog_model("conformal_cp1xcp1");
  auto scalar = [&](const ChartPoint& p) { return std::vector<double>{PointGeometry(conf, p, 0).curvature().scalar}; };
  CHECK(code_of([&] { require_homogeneous(conf, scalar, 5, 1e-8, 0); }) == ErrorCode::NonHomogeneous);
  const auto cp2 = make_catalog_model("cp2");
  auto scalar2 = [&](const ChartPoint& p) { return std::vector<double>{PointGeometry(cp2, p, 0).curvature().scalar}; };
  CHECK(require_homogeneous(cp2, scalar2)[0] == doctest::Approx(6.0));
}
