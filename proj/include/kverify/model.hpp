#pragma once

// Explicit model manifolds: closed-form chart metrics with optional almost
// complex structures, evaluated through jet arithmetic.

#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kverify/jet.hpp"
#include "kverify/tensor.hpp"

namespace kverify {

struct ChartPoint {
  int chart_id = 0;
  std::vector<double> coords;
};

enum class ModelKind {
  RoundSphere,
  FlatTorus,
  FubiniStudy,
  ComplexHyperbolic,
  Product,
  Scaled,
  Conformal,
  BlackBox,
};

const char* model_kind_name(ModelKind kind);

struct ModelSpec {
  ModelKind kind = ModelKind::FubiniStudy;
  int complex_dim = 1;      // N, fubini_study / complex_hyperbolic
  int real_dim = 2;         // n, round_sphere / flat_torus
  double curvature = 1.0;   // c, holomorphic sectional curvature
  double radius = 1.0;      // round_sphere
  double scale = 1.0;       // lambda for scaled: g -> lambda^2 g
  double amplitude = 0.1;   // conformal bump
  double width = 0.5;       // conformal bump support radius
  std::vector<double> center;  // conformal bump center, defaults to the origin
  std::vector<ModelSpec> children;
  std::string name;
};

// Known closed-form properties. Whatever is set here is checked by sampling
// when the model is built.
struct ModelMetadata {
  std::optional<double> einstein_constant;
  std::optional<double> constant_h;
  bool kahler = false;
  bool homogeneous = false;
  bool symmetric = false;  // parallel curvature
  bool flat = false;
  // Product of two real surfaces with block-diagonal J (the polarization check needs this).
  bool product_of_surfaces = false;

  bool complex_space_form() const { return kahler && constant_h.has_value(); }
};

namespace detail {
class MetricNode;
}

class ModelManifold {
 public:
  ModelManifold(std::shared_ptr<const detail::MetricNode> node, ModelSpec spec, std::string name);

  int dimension() const;
  bool has_complex_structure() const;
  const std::string& name() const noexcept { return name_; }
  const ModelSpec& spec() const noexcept { return spec_; }
  const ModelMetadata& metadata() const;
  int chart_count() const;

  bool contains(const ChartPoint& p) const;

  // Metric and complex structure components as jets of the given order around p.
  JetMatrix metric(const ChartPoint& p, int order) const;
  std::optional<JetMatrix> complex_structure(const ChartPoint& p, int order) const;

  Matrix metric_value(const ChartPoint& p) const;
  std::optional<Matrix> complex_structure_value(const ChartPoint& p) const;

  ChartPoint origin() const;
  ChartPoint sample_point(std::mt19937_64& rng) const;

  // Coordinates of p in chart `target`, with the Jacobian d(target)/d(source).
  // Empty when the model has a single chart or p is not covered by `target`.
  struct Transition {
    ChartPoint point;
    Matrix jacobian;
  };
  std::optional<Transition> to_chart(const ChartPoint& p, int target) const;

  const detail::MetricNode& node() const { return *node_; }

 private:
  void require_contains(const ChartPoint& p) const;

  std::shared_ptr<const detail::MetricNode> node_;
  ModelSpec spec_;
  std::string name_;
};

using MetricFunction = std::function<Matrix(std::span<const double>)>;

// Builds a model; throws InvalidArgument on bad parameters and verifies
// metadata by sampling.
ModelManifold make_model(const ModelSpec& spec);

// A user-supplied metric with no closed form. Derivatives come from
// Richardson-extrapolated central differences (step 1e-3, two levels).
ModelManifold make_black_box_model(int dimension, MetricFunction metric, std::optional<Matrix> complex_structure,
                                   double validity_radius, std::string name);

// Rescales so that the maximum absolute sectional curvature is 1.
ModelManifold normalize(const ModelManifold& model);

ModelSpec catalog_spec(std::string_view name);
std::vector<std::string> catalog_names();
ModelManifold make_catalog_model(std::string_view name);

// Default display name for a spec (e.g. "fubini_study(N=2,c=1)").
std::string describe(const ModelSpec& spec);

// Finite-difference Taylor coefficients of a scalar function at x, all
// monomials up to `order`, in JetSpace monomial order.
std::vector<double> finite_difference_taylor(const std::function<double(std::span<const double>)>& f,
                                             std::span<const double> x, int order, double step = 1e-3);

}  // namespace kverify
