#pragma once

// Curvature of model manifolds.
//
// Sign convention: R_{abcd} = g(nabla_{[a,b]} c - [nabla_a, nabla_b] c, d), so that
// sec(x, y) = R(x, y, x, y) / (|x|^2 |y|^2 - g(x, y)^2) is +1 on the unit round
// sphere. All frame-indexed data is expressed in an orthonormal frame; the
// frame is adapted (e_{2k} = J e_{2k-1}) whenever the model carries J.

#include <cstdint>
#include <optional>
#include <span>

#include "kverify/error.hpp"
#include "kverify/jet.hpp"
#include "kverify/model.hpp"
#include "kverify/tensor.hpp"

namespace kverify {

struct MetricJet {
  int order = 0;
  JetMatrix components;

  double value(int i, int j) const { return components(i, j).value(); }
  // Partial derivative d^alpha g_ij at the expansion point.
  double derivative(int i, int j, std::span<const int> alpha) const { return components(i, j).derivative(alpha); }
};

MetricJet metric_jet(const ModelManifold& model, const ChartPoint& point, int order);

struct Frame {
  Matrix vectors;  // column a = chart components of e_a
  bool adapted = false;
};

Frame build_frame(const Matrix& metric, const std::optional<Matrix>& complex_structure,
                  const std::optional<Vector>& seed = std::nullopt);
Frame build_frame(const ModelManifold& model, const ChartPoint& point,
                  const std::optional<Vector>& seed = std::nullopt);

struct CurvatureData {
  int dimension = 0;
  int deriv_order = 0;
  Tensor R;                   // R(a, b, c, d)
  std::optional<Tensor> dR;   // dR(a, b, c, d, e) = (nabla_{e_e} R)_{abcd}
  std::optional<Tensor> d2R;  // d2R(a, b, c, d, e, f) = (nabla_{e_f} nabla R)_{abcd;e}
  Matrix ricci;               // ricci(i, j) = sum_a R(a, i, a, j)
  double scalar = 0.0;
};

// Everything computed at one chart point: coordinate Christoffel symbols,
// curvature, the frame, and the complex structure with its covariant
// derivative when J exists.
class PointGeometry {
 public:
  PointGeometry(const ModelManifold& model, const ChartPoint& point, int deriv_order,
                const std::optional<Vector>& seed = std::nullopt);

  const ChartPoint& point() const noexcept { return point_; }
  const Frame& frame() const noexcept { return frame_; }
  const CurvatureData& curvature() const noexcept { return curvature_; }
  const Matrix& metric() const noexcept { return metric_; }
  // christoffel()(i, j, k) = Gamma^i_{jk}
  const Tensor& christoffel() const noexcept { return christoffel_; }
  // Paper-convention Riemann tensor in chart components.
  const Tensor& coordinate_riemann() const noexcept { return coordinate_riemann_; }

  bool has_complex_structure() const noexcept { return j_frame_.has_value(); }
  // J in frame components: column b holds J e_b.
  const Matrix& complex_structure() const;
  // nabla_j()(c, a, b) = frame component a of (nabla_{e_c} J) e_b.
  const Tensor& nabla_j() const;

  // Chart components of a frame vector and back.
  Vector to_chart(const Vector& frame_components) const { return frame_.vectors * frame_components; }
  Vector to_frame(const Vector& chart_components) const;

 private:
  ChartPoint point_;
  Matrix metric_;
  Tensor christoffel_;
  Tensor coordinate_riemann_;
  Frame frame_;
  CurvatureData curvature_;
  std::optional<Matrix> j_frame_;
  std::optional<Tensor> nabla_j_;
};

CurvatureData curvature(const ModelManifold& model, const ChartPoint& point, int deriv_order);

// Sectional curvature of span{x, y}; x and y in frame components.
double sectional(const CurvatureData& curv, const Vector& x, const Vector& y);

class NotEinsteinError : public Error {
 public:
  NotEinsteinError(const std::string& message, double deviation, ChartPoint witness)
      : Error(ErrorCode::NotEinstein, message), deviation_(deviation), witness_(std::move(witness)) {}

  double deviation() const noexcept { return deviation_; }
  const ChartPoint& witness() const noexcept { return witness_; }

 private:
  double deviation_;
  ChartPoint witness_;
};

// Mean of s/n over sampled points; throws NotEinsteinError when
// max |Ric - Lambda g| exceeds tol anywhere.
double einstein_constant(const ModelManifold& model, int sample_count = 8, double tol = 1e-8,
                         std::uint64_t seed = 0);

// Extreme sectional curvatures over 2-planes of one point by multi-start
// projected ascent on the Grassmannian.
struct SectionalRange {
  double min = 0.0;
  double max = 0.0;
};
SectionalRange sectional_range(const Tensor& R, int restarts = 64, std::uint64_t seed = 0);

// max |sec| over the model (a single point for homogeneous models).
double max_abs_sec(const ModelManifold& model, int restarts = 64, std::uint64_t seed = 0);

// Samples the model and checks any closed-form metadata it declares.
void verify_model_metadata(const ModelManifold& model);

}  // namespace kverify
