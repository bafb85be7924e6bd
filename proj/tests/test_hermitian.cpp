#include <cmath>
#include <random>

#include "doctest.h"
#include "kverify/error.hpp"
#include "kverify/hermitian.hpp"
#include "kverify/model.hpp"
#include "oracles.hpp"

using namespace kverify;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("hermitian diagnostics") {
  const auto torus = make_catalog_model("torus4");
  const auto t = validate_hermitian(torus, torus.origin());
  CHECK(t.j_squared == 0.0);
  CHECK(t.compatibility == 0.0);
  CHECK(t.nabla_j == 0.0);

  const auto cp2 = make_catalog_model("cp2");
  const auto c = validate_hermitian(cp2, cp2.origin());
  CHECK(c.j_squared < 1e-10);
  CHECK(c.compatibility < 1e-10);
  CHECK(c.nabla_j < 1e-10);

  const auto conf = make_catalog_model("conformal_cp1xcp1");
  const auto d = validate_hermitian(conf, ChartPoint{0, {0.1, -0.2, 0.15, 0.05}});
  CHECK(d.j_squared < 1e-10);
  CHECK(d.compatibility < 1e-10);
  CHECK(d.nabla_j > 1e-3);
}

TEST_CASE("holomorphic and bisectional curvature examples") {
  std::mt19937_64 rng(11);
  const auto torus = make_catalog_model("torus4");
  const PointGeometry gt(torus, torus.origin(), 0);
  const Vector x = oracle::random_unit(4, rng);
  CHECK(holomorphic_sec(gt.curvature(), gt.complex_structure(), x) == 0.0);
  CHECK(bisectional(gt.curvature(), gt.complex_structure(), x, oracle::random_unit(4, rng)) == 0.0);

  const auto cp2 = make_catalog_model("cp2");
  const PointGeometry g2(cp2, ChartPoint{0, {0.3, -0.2, 0.1, 0.4}}, 0);
  for (int k = 0; k < 20; ++k) {
    CHECK(holomorphic_sec(g2.curvature(), g2.complex_structure(), oracle::random_unit(4, rng)) ==
          doctest::Approx(1.0).epsilon(1e-10));
  }
  // e_0 and e_2 span orthogonal J-invariant planes in an adapted frame.
  CHECK(bisectional(g2.curvature(), g2.complex_structure(), Vector::Unit(4, 0), Vector::Unit(4, 2)) ==
        doctest::Approx(0.5).epsilon(1e-10));

  const auto prod = make_catalog_model("cp1xcp1");
  const PointGeometry gp(prod, ChartPoint{0, {0.2, 0.1, -0.3, 0.25}}, 0);
  for (int k = 0; k < 20; ++k) {
    const Vector v = oracle::random_unit(4, rng);
    const double t = v[0] * v[0] + v[1] * v[1];
    CHECK(holomorphic_sec(gp.curvature(), gp.complex_structure(), v) ==
          doctest::Approx(t * t + (1 - t) * (1 - t)).epsilon(1e-10));
  }
  CHECK(std::abs(bisectional(gp.curvature(), gp.complex_structure(), Vector::Unit(4, 0), Vector::Unit(4, 2))) <
        1e-12);
}

TEST_CASE("holomorphic curvature invariances") {
  std::mt19937_64 rng(5);
  for (const char* name : {"cp2", "cp1xcp1", "ch2", "conformal_cp1xcp1", "cp3"}) {
    const auto model = make_catalog_model(name);
    const PointGeometry geo(model, model.sample_point(rng), 0);
    const Matrix& j = geo.complex_structure();
    const QuarticForm form = quartic_form(geo.curvature(), j);
    const Polynomial poly = form.polynomial();
    for (int k = 0; k < 200; ++k) {
      const Vector x = oracle::random_unit(model.dimension(), rng);
      const double h = holomorphic_sec(geo.curvature(), j, x);
      CHECK(std::abs(holomorphic_sec(geo.curvature(), j, j * x) - h) < 1e-10);
      CHECK(std::abs(holomorphic_sec(geo.curvature(), j, -x) - h) < 1e-10);
      CHECK(std::abs(bisectional(geo.curvature(), j, x, x) - h) < 1e-12);
      CHECK(std::abs(form.evaluate(x) - h) < 1e-10);
      CHECK(std::abs(poly.evaluate(x) - h) < 1e-10);
    }
  }
}

TEST_CASE("unit vector preconditions") {
  const auto cp2 = make_catalog_model("cp2");
  const PointGeometry geo(cp2, cp2.origin(), 0);
  CHECK_THROWS_AS(holomorphic_sec(geo.curvature(), geo.complex_structure(), 2.0 * Vector::Unit(4, 0)), Error);
  CHECK_THROWS_AS(bisectional(geo.curvature(), geo.complex_structure(), Vector::Unit(4, 0), Vector::Zero(4)), Error);
}

TEST_CASE("quartic form coefficients") {
  const auto torus = make_catalog_model("torus4");
  const PointGeometry gt(torus, torus.origin(), 0);
  const QuarticForm ft = quartic_form(gt.curvature(), gt.complex_structure());
  for (double w : ft.W.values()) CHECK(w == 0.0);

  std::mt19937_64 rng(3);
  for (const char* name : {"cp1", "cp2", "cp3", "cp2_c2"}) {
    const auto model = make_catalog_model(name);
    const double c = model.metadata().constant_h.value();
    const PointGeometry geo(model, model.sample_point(rng), 0);
    const QuarticForm f = quartic_form(geo.curvature(), geo.complex_structure());
    for (int k = 0; k < 10; ++k) {
      Vector v = oracle::random_unit(model.dimension(), rng) * (0.5 + k * 0.2);
      CHECK(f.evaluate(v) == doctest::Approx(c * std::pow(v.squaredNorm(), 2)).epsilon(1e-10));
    }
  }

  const auto prod = make_catalog_model("cp1xcp1");
  const PointGeometry gp(prod, prod.sample_point(rng), 0);
  const QuarticForm fp = quartic_form(gp.curvature(), gp.complex_structure());
  for (int k = 0; k < 10; ++k) {
    Vector v = oracle::random_unit(4, rng) * 1.7;
    const double a = v[0] * v[0] + v[1] * v[1], b = v[2] * v[2] + v[3] * v[3];
    CHECK(fp.evaluate(v) == doctest::Approx(a * a + b * b).epsilon(1e-10));
  }
  // Full permutation symmetry.
  const Tensor& w = fp.W;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          CHECK(w(i, j, k, l) == doctest::Approx(w(j, i, k, l)));
          CHECK(w(i, j, k, l) == doctest::Approx(w(k, j, i, l)));
          CHECK(w(i, j, k, l) == doctest::Approx(w(l, j, k, i)));
        }
}

TEST_CASE("star curvature") {
  const auto torus = make_catalog_model("torus4");
  const PointGeometry gt(torus, torus.origin(), 0);
  const auto st = star_curvature(gt.curvature(), gt.complex_structure());
  CHECK(max_abs(st.star_ricci) == 0.0);
  CHECK(st.star_scalar == 0.0);

  const auto cp2 = make_catalog_model("cp2");
  const PointGeometry g2(cp2, ChartPoint{0, {0.1, 0.2, -0.3, 0.05}}, 0);
  const auto s2 = star_curvature(g2.curvature(), g2.complex_structure());
  CHECK(s2.star_scalar == doctest::Approx(6.0).epsilon(1e-10));
  CHECK(g2.curvature().scalar == doctest::Approx(6.0).epsilon(1e-10));

  std::mt19937_64 rng(9);
  for (const char* name : {"cp1", "cp2", "cp3", "ch2", "cp1xcp1", "cp1xcp1_c2", "ch1xch1", "cp2_c2"}) {
    const auto model = make_catalog_model(name);
    const double lambda = model.metadata().einstein_constant.value();
    const PointGeometry geo(model, model.sample_point(rng), 0);
    const auto s = star_curvature(geo.curvature(), geo.complex_structure());
    const int n = model.dimension();
    CHECK(max_abs(s.star_ricci - lambda * Matrix::Identity(n, n)) < 1e-8);
    CHECK(max_abs(s.star_ricci - geo.curvature().ricci) < 1e-8);
    CHECK(std::abs(s.star_scalar - geo.curvature().scalar) < 1e-8);
  }

  const auto conf = make_catalog_model("conformal_cp1xcp1");
  const PointGeometry gc(conf, ChartPoint{0, {0.1, -0.05, 0.2, 0.0}}, 0);
  const auto sc = star_curvature(gc.curvature(), gc.complex_structure());
  CHECK(std::isfinite(sc.star_scalar));
  CHECK(std::abs(sc.star_scalar - gc.curvature().scalar) > 1e-3);

  // Not adapted: a frame whose J block structure is broken.
  Matrix j = Matrix::Zero(4, 4);
  j(2, 0) = 1;
  j(0, 2) = -1;
  j(3, 1) = 1;
  j(1, 3) = -1;
  CHECK_FALSE(is_adapted(j));
  try {
    star_curvature(g2.curvature(), j);
    FAIL("expected NotAdapted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotAdapted);
  }
}

TEST_CASE("s and s* do not depend on the adapted frame") {
  std::mt19937_64 rng(21);
  const auto conf = make_catalog_model("conformal_cp1xcp1");
  const ChartPoint p{0, {0.12, -0.07, 0.2, 0.03}};
  const PointGeometry a(conf, p, 0, oracle::random_unit(4, rng));
  const PointGeometry b(conf, p, 0, oracle::random_unit(4, rng));
  CHECK((a.frame().vectors - b.frame().vectors).cwiseAbs().maxCoeff() > 1e-3);
  CHECK(std::abs(a.curvature().scalar - b.curvature().scalar) < 1e-10);
  CHECK(std::abs(star_curvature(a.curvature(), a.complex_structure()).star_scalar -
                 star_curvature(b.curvature(), b.complex_structure()).star_scalar) < 1e-10);
}

TEST_CASE("nabla J matches a finite-difference Levi-Civita oracle on the conformal model") {
  const auto conf = make_catalog_model("conformal_cp1xcp1");
  for (const ChartPoint& p : {ChartPoint{0, {0.1, -0.2, 0.15, 0.05}}, ChartPoint{0, {-0.2, 0.1, 0.0, 0.25}}}) {
    const PointGeometry geo(conf, p, 1);
    const Tensor& nj = geo.nabla_j();
    const Tensor gamma = oracle::fd_christoffel(conf, p);
    const Matrix jc = conf.complex_structure_value(p).value();
    const Matrix& e = geo.frame().vectors;
    const Matrix einv = e.inverse();
    // J is constant in the chart: (nabla_k J)^a_b = Gamma^a_{kc} J^c_b - Gamma^c_{kb} J^a_c.
    double worst = 0.0;
    for (int c = 0; c < 4; ++c) {
      Matrix dj = Matrix::Zero(4, 4);
      for (int k = 0; k < 4; ++k) {
        Matrix gk(4, 4);
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) gk(a, b) = gamma(a, k, b);
        dj += e(k, c) * (gk * jc - jc * gk);
      }
      const Matrix frame_dj = einv * dj * e;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) worst = std::max(worst, std::abs(nj(c, a, b) - frame_dj(a, b)));
    }
    CHECK(worst < 1e-6);
    CHECK(nj.max_abs() > 1e-3);
  }

  const auto torus = make_catalog_model("torus4");
  CHECK(nabla_J(torus, torus.origin()).max_abs() == 0.0);
  std::mt19937_64 rng(4);
  for (const char* name : {"cp2", "ch2", "cp1xcp1", "cp3"}) {
    const auto model = make_catalog_model(name);
    CHECK(nabla_J(model, model.sample_point(rng)).max_abs() < 1e-9);
  }
}
