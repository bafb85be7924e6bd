#include <cmath>
#include <random>

#include "doctest.h"
#include "kverify/error.hpp"
#include "kverify/fiber.hpp"
#include "kverify/hermitian.hpp"
#include "kverify/model.hpp"
#include "kverify/model_config.hpp"
#include "oracles.hpp"

using namespace kverify;

namespace {

ModelSpec leaf(ModelKind kind, int dim, double c) {
  ModelSpec s;
  s.kind = kind;
  s.complex_dim = dim;
  s.real_dim = dim;
  s.curvature = c;
  return s;
}

}  // namespace

TEST_CASE("flat torus model") {
  const auto t = make_model(leaf(ModelKind::FlatTorus, 4, 0));
  const ChartPoint p{0, {0.4, -1.0, 2.0, 0.3}};
  CHECK((t.metric_value(p) - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
  const Matrix j = t.complex_structure_value(p).value();
  CHECK((j * j + Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(j(1, 0) == 1.0);
  CHECK(j(0, 1) == -1.0);
  CHECK(t.metadata().einstein_constant.value() == 0.0);
  CHECK(einstein_constant(t) == doctest::Approx(0.0));
}

TEST_CASE("Fubini-Study on CP^1 with c = 1 is the unit sphere") {
  std::mt19937_64 rng(2);
  const auto cp1 = make_model(leaf(ModelKind::FubiniStudy, 1, 1.0));
  const auto s2 = make_catalog_model("s2");
  for (int k = 0; k < 10; ++k) {
    const ChartPoint p = cp1.sample_point(rng);
    const PointGeometry geo(cp1, p, 0);
    CHECK(sectional(geo.curvature(), Vector::Unit(2, 0), Vector::Unit(2, 1)) == doctest::Approx(1.0).epsilon(1e-10));
    const PointGeometry gs(s2, s2.sample_point(rng), 0);
    CHECK(gs.curvature().R(0, 1, 0, 1) == doctest::Approx(geo.curvature().R(0, 1, 0, 1)).epsilon(1e-10));
  }
}

TEST_CASE("CP^1 x CP^1 model") {
  const auto m = make_catalog_model("cp1xcp1");
  CHECK(m.dimension() == 4);
  CHECK(m.metadata().homogeneous);
  CHECK(einstein_constant(m) == doctest::Approx(1.0).epsilon(1e-10));
  const PointGeometry geo(m, m.origin(), 0);
  CHECK(fiber_max_H(quartic_form(geo.curvature(), geo.complex_structure())).value ==
        doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("catalog Kahler-Einstein models match their Einstein metadata") {
  for (const auto& name : catalog_names()) {
    const auto m = make_catalog_model(name);
    if (!m.metadata().einstein_constant) continue;
    CHECK(einstein_constant(m, 8, 1e-8) == doctest::Approx(*m.metadata().einstein_constant).epsilon(1e-8));
  }
}

TEST_CASE("Fubini-Study models have constant holomorphic sectional curvature c") {
  std::mt19937_64 rng(13);
  for (const auto& [dim, c] : std::vector<std::pair<int, double>>{{1, 1.0}, {2, 1.0}, {2, 2.0}, {3, 0.5}}) {
    const auto m = make_model(leaf(ModelKind::FubiniStudy, dim, c));
    for (int k = 0; k < 100; ++k) {
      const PointGeometry geo(m, m.sample_point(rng), 0);
      const Vector x = oracle::random_unit(m.dimension(), rng);
      CHECK(std::abs(holomorphic_sec(geo.curvature(), geo.complex_structure(), x) - c) < 1e-9);
    }
  }
}

TEST_CASE("complex hyperbolic curvature is the negated Fubini-Study pattern") {
  for (int dim : {1, 2}) {
    const auto fs = make_model(leaf(ModelKind::FubiniStudy, dim, 1.0));
    const auto ch = make_model(leaf(ModelKind::ComplexHyperbolic, dim, -1.0));
    const PointGeometry a(fs, fs.origin(), 0);
    const PointGeometry b(ch, ch.origin(), 0);
    const auto& ra = a.curvature().R.values();
    const auto& rb = b.curvature().R.values();
    REQUIRE(ra.size() == rb.size());
    for (std::size_t i = 0; i < ra.size(); ++i) CHECK(std::abs(ra[i] + rb[i]) < 1e-9);
  }
}

TEST_CASE("conformal rescale with zero amplitude is the identity") {
  ModelSpec spec;
  spec.kind = ModelKind::Conformal;
  spec.amplitude = 0.0;
  spec.children.push_back(catalog_spec("cp1xcp1"));
  const auto conf = make_model(spec);
  const auto base = make_catalog_model("cp1xcp1");
  std::mt19937_64 rng(1);
  for (int k = 0; k < 10; ++k) {
    const ChartPoint p = conf.sample_point(rng);
    CHECK((conf.metric_value(p).array() == base.metric_value(p).array()).all());
    CHECK((conf.complex_structure_value(p).value().array() == base.complex_structure_value(p).value().array()).all());
  }
}

TEST_CASE("invalid model parameters") {
  CHECK_THROWS_AS(make_model(leaf(ModelKind::FubiniStudy, 2, -1.0)), Error);
  CHECK_THROWS_AS(make_model(leaf(ModelKind::ComplexHyperbolic, 2, 1.0)), Error);
  ModelSpec scaled;
  scaled.kind = ModelKind::Scaled;
  scaled.scale = 0.0;
  scaled.children.push_back(catalog_spec("cp2"));
  CHECK_THROWS_AS(make_model(scaled), Error);
  ModelSpec conf;
  conf.kind = ModelKind::Conformal;
  conf.width = 200.0;
  conf.children.push_back(catalog_spec("ch2"));
  CHECK_THROWS_AS(make_model(conf), Error);
}

TEST_CASE("normalize") {
  const auto cp2c2 = make_catalog_model("cp2_c2");
  const auto n = normalize(cp2c2);
  CHECK(n.spec().kind == ModelKind::Scaled);
  CHECK(n.spec().scale * n.spec().scale == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(max_abs_sec(n) == doctest::Approx(1.0).epsilon(1e-4));

  const auto s4 = normalize(make_catalog_model("s4"));
  CHECK(s4.spec().scale == doctest::Approx(1.0).epsilon(1e-6));

  try {
    normalize(make_catalog_model("torus4"));
    FAIL("expected FlatModel");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FlatModel);
  }
}

TEST_CASE("model spec YAML round trip for every catalog entry") {
  for (const auto& name : catalog_names()) {
    const ModelSpec spec = catalog_spec(name);
    const ModelSpec back = parse_model_spec(model_spec_to_yaml(spec));
    CHECK(model_spec_to_yaml(back) == model_spec_to_yaml(spec));
    const auto a = make_model(spec);
    const auto b = make_model(back);
    CHECK(a.name() == b.name());
    CHECK((a.metric_value(a.origin()) - b.metric_value(b.origin())).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("shipped model files match the catalog") {
  for (const auto& name : catalog_names()) {
    const std::string path = std::string(KVERIFY_SOURCE_DIR) + "/models/" + name + ".yaml";
    const auto from_file = resolve_model(path);
    CHECK(from_file.name() == name);
    CHECK(model_spec_to_yaml(from_file.spec()) == model_spec_to_yaml(catalog_spec(name)));
  }
}

TEST_CASE("model spec parse errors") {
  auto code = [](const std::string& text) {
    try {
      parse_model_spec(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Internal;
  };
  CHECK(code("kind: fubini_study\nN: 2\nbogus: 1\n") == ErrorCode::ParseError);
  CHECK(code("N: 2\n") == ErrorCode::ParseError);
  CHECK(code("kind: klein_bottle\n") == ErrorCode::ParseError);
  CHECK(code("kind: fubini_study\nN: two\n") == ErrorCode::ParseError);
  CHECK(code("kind: [unterminated\n") == ErrorCode::ParseError);
  CHECK(code("kind: product\nchildren: 3\n") == ErrorCode::ParseError);
  const ModelSpec ch = parse_model_spec("kind: complex_hyperbolic\nN: 2\n");
  CHECK(ch.curvature == -1.0);
  try {
    resolve_model("no_such_model_or_file");
    FAIL("expected UnknownModel");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownModel);
  }
}
