#pragma once

// Exact integration over unit-sphere fibers and the fiber statistics of H.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "kverify/hermitian.hpp"
#include "kverify/polynomial.hpp"
#include "kverify/report.hpp"

namespace kverify {

// Vol(S^{n-1}) = 2 pi^{n/2} / Gamma(n/2)
double sphere_volume(int n);

// Integral of v^alpha over S^{n-1}.
double monomial_moment(int n, std::span<const int> alpha);

// Per-dimension moment tables, created once and shared.
class MomentTable {
 public:
  static const MomentTable& get(int n);

  int dimension() const noexcept { return n_; }
  double volume() const noexcept { return volume_; }
  double moment(const Polynomial::Exponent& alpha) const;

  explicit MomentTable(int n);

 private:
  int n_;
  double volume_;
  std::vector<double> odd_double_factorial_;  // entry k = (2k - 1)!!
  std::vector<double> denominator_;           // entry m = prod_{j <= m} (n + 2j - 2)
};

struct FiberIntegral {
  double value = 0.0;
  std::size_t odd_terms = 0;  // terms with an odd exponent; they integrate to zero
};

FiberIntegral integrate_fiber(const Polynomial& p);
// Integral divided by the sphere volume.
double fiber_average(const Polynomial& p);

// Prop. 3.1 style identity: int D f = r (n + r - 2) int f for homogeneous f of degree r.
VerificationReport homogeneous_lap_identity(const Polynomial& f, int r, double tol);

struct FiberMaximum {
  double value = 0.0;
  Vector argmax;
};

// Maximum of F on the unit sphere by multi-start projected gradient ascent.
FiberMaximum fiber_max_H(const QuarticForm& form, int restarts = 32, std::uint64_t seed = 0);

struct FiberStats {
  double h_av = 0.0;
  double h_max = 0.0;
  double variance = 0.0;           // int (H - H_av)^2 / Vol
  double gradv_sq_integral = 0.0;  // int |grad^v H|^2 / Vol
  // Present when the model is Kahler-Einstein.
  std::optional<double> einstein_constant;
  std::optional<double> h_av_expected;  // 4 Lambda / (n + 2)
  std::optional<double> lap_deviation;  // max |eig(D F) - 16 Lambda|
};

// Statistics at one point; `lambda` switches on the Kahler-Einstein relations.
FiberStats fiber_stats(const PointGeometry& geo, std::optional<double> lambda);
FiberStats h_stats(const ModelManifold& model, const ChartPoint& point);

// Einstein constant if the model is Kahler-Einstein, empty otherwise.
std::optional<double> kahler_einstein_constant(const ModelManifold& model);

VerificationReport berger_check(const ModelManifold& model, const ChartPoint& point, double tol);

// Variance identity plus the H_av and D H relations at one point.
std::vector<VerificationReport> variance_identity_check(const ModelManifold& model, const ChartPoint& point,
                                                        double tol);

// Rayleigh quotient of H on S(M) for a homogeneous normalized non-space-form KE model.
struct RayleighData {
  double horizontal = 0.0;  // int |grad^h H|^2 / Vol
  double vertical = 0.0;    // int |grad^v H|^2 / Vol
  double variance = 0.0;
  double curvature_term = 0.0;  // int R(x, G, x, G) / Vol with G = grad^v H
  double max_abs_sec = 0.0;
  double quotient = 0.0;
};

RayleighData rayleigh_data(const ModelManifold& model, std::uint64_t seed = 0);
std::vector<VerificationReport> rayleigh_check(const ModelManifold& model, double tol, std::uint64_t seed = 0);

// H_av / H_max at each point against 2/3.
std::vector<VerificationReport> theorem4_ratio(const ModelManifold& model, const std::vector<ChartPoint>& points,
                                               double tol);

// Evaluates `values` at `count` sampled points and throws NonHomogeneous when
// any component spreads by more than tol. Returns the values at the first point.
std::vector<double> require_homogeneous(const ModelManifold& model,
                                        const std::function<std::vector<double>(const ChartPoint&)>& values,
                                        int count = 5, double tol = 1e-8, std::uint64_t seed = 0);

// Polynomial for R(x, G, x, G) with G = grad^v H, valid on the unit fiber.
Polynomial vertical_curvature_polynomial(const CurvatureData& curv, const Matrix& j);

}  // namespace kverify
