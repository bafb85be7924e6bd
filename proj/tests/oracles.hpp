#pragma once

// Independent reference computations used by the unit tests.

#include <cmath>
#include <functional>
#include <random>

#include "kverify/geometry.hpp"
#include "kverify/model.hpp"
#include "kverify/tensor.hpp"

namespace oracle {

using kverify::Matrix;
using kverify::Tensor;
using kverify::Vector;

// Curvature of a complex space form with holomorphic sectional curvature c in
// an orthonormal J-adapted frame, built from g = delta and omega(x, y) = <Jx, y>.
inline Tensor space_form_tensor(const Matrix& j, double c) {
  const int n = static_cast<int>(j.rows());
  Matrix w(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) w(a, b) = j.col(a).dot(Vector::Unit(n, b));
  }
  Tensor r(n, 4);
  auto d = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          r(a, b, x, y) = c / 4.0 *
                          (d(a, x) * d(b, y) - d(a, y) * d(b, x) + w(a, x) * w(b, y) - w(a, y) * w(b, x) +
                           2.0 * w(a, b) * w(x, y));
  return r;
}

inline Vector random_unit(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = normal(rng);
  return v.normalized();
}

// Central difference of a scalar function of the chart coordinates.
inline double central(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x, int i,
                      double h = 1e-4) {
  const double x0 = x[static_cast<std::size_t>(i)];
  x[static_cast<std::size_t>(i)] = x0 + h;
  const double fp = f(x);
  x[static_cast<std::size_t>(i)] = x0 - h;
  const double fm = f(x);
  return (fp - fm) / (2 * h);
}

// Christoffel symbols Gamma^i_{jk} from central differences of the metric.
inline Tensor fd_christoffel(const kverify::ModelManifold& model, const kverify::ChartPoint& p, double h = 1e-5) {
  const int n = model.dimension();
  std::vector<Matrix> dg;
  for (int k = 0; k < n; ++k) {
    kverify::ChartPoint a = p, b = p;
    a.coords[static_cast<std::size_t>(k)] += h;
    b.coords[static_cast<std::size_t>(k)] -= h;
    dg.push_back((model.metric_value(a) - model.metric_value(b)) / (2 * h));
  }
  const Matrix ginv = model.metric_value(p).inverse();
  Tensor gamma(n, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) {
          s += 0.5 * ginv(i, l) *
               (dg[static_cast<std::size_t>(j)](l, k) + dg[static_cast<std::size_t>(k)](l, j) -
                dg[static_cast<std::size_t>(l)](j, k));
        }
        gamma(i, j, k) = s;
      }
  return gamma;
}

}  // namespace oracle
