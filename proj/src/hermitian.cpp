#include "kverify/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "kverify/error.hpp"

namespace kverify {

namespace {

void require_unit(const Vector& x, const char* what) {
  if (std::abs(x.norm() - 1.0) > 1e-10) {
    fail(ErrorCode::InvalidArgument, std::string(what) + " must be a unit vector");
  }
}

void require_dims(const CurvatureData& curv, const Matrix& j) {
  if (j.rows() != curv.dimension || j.cols() != curv.dimension) {
    fail(ErrorCode::InvalidArgument, "complex structure and curvature dimensions differ");
  }
}

// T(b, m, d, l) = R(e_b, J e_m, e_d, J e_l)
Tensor r_jj(const Tensor& r, const Matrix& j) { return r.transform_slot(1, j).transform_slot(3, j); }

Tensor symmetrize4(const Tensor& t) {
  const int n = t.dim();
  Tensor w(n, 4);
  std::array<int, 4> p{0, 1, 2, 3};
  std::array<int, 4> idx{};
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          idx = {a, b, c, d};
          double s = 0.0;
          p = {0, 1, 2, 3};
          do {
            s += t(idx[static_cast<std::size_t>(p[0])], idx[static_cast<std::size_t>(p[1])],
                   idx[static_cast<std::size_t>(p[2])], idx[static_cast<std::size_t>(p[3])]);
          } while (std::next_permutation(p.begin(), p.end()));
          w(a, b, c, d) = s / 24.0;
        }
  return w;
}

}  // namespace

HermitianDiagnostics validate_hermitian(const ModelManifold& model, const ChartPoint& point) {
  if (!model.has_complex_structure()) fail(ErrorCode::InvalidArgument, "model carries no almost complex structure");
  const PointGeometry geo(model, point, 0);
  const Matrix& j = geo.complex_structure();
  const int n = model.dimension();
  HermitianDiagnostics d;
  d.j_squared = (j * j + Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  // The frame is orthonormal, so compatibility is orthogonality of J.
  d.compatibility = (j.transpose() * j - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  d.nabla_j = geo.nabla_j().max_abs();
  return d;
}

double holomorphic_sec(const CurvatureData& curv, const Matrix& j, const Vector& x) {
  require_dims(curv, j);
  require_unit(x, "x");
  const Vector jx = j * x;
  return contract4(curv.R, x, jx, x, jx);
}

double bisectional(const CurvatureData& curv, const Matrix& j, const Vector& x, const Vector& y) {
  require_dims(curv, j);
  require_unit(x, "x");
  require_unit(y, "y");
  return contract4(curv.R, x, j * x, y, j * y);
}

Vector QuarticForm::gradient(const Vector& v) const {
  const int n = W.dim();
  Vector g = Vector::Zero(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const double vbc = v[b] * v[c];
        if (vbc == 0.0) continue;
        for (int d = 0; d < n; ++d) g[a] += W(a, b, c, d) * vbc * v[d];
      }
  return 4.0 * g;
}

QuarticForm quartic_form(const CurvatureData& curv, const Matrix& j) {
  require_dims(curv, j);
  QuarticForm q{symmetrize4(r_jj(curv.R, j))};
  // Internal postcondition: symmetrization reproduces direct evaluation.
  std::mt19937_64 rng(0x51ed);
  std::normal_distribution<double> normal;
  const double scale = std::max(1.0, curv.R.max_abs());
  for (int k = 0; k < 8; ++k) {
    Vector v(curv.dimension);
    for (int i = 0; i < curv.dimension; ++i) v[i] = normal(rng);
    v.normalize();
    const Vector jv = j * v;
    const double direct = contract4(curv.R, v, jv, v, jv);
    if (std::abs(direct - q.evaluate(v)) > 1e-10 * scale) {
      fail(ErrorCode::Internal, "symmetrized quartic form disagrees with direct evaluation");
    }
  }
  return q;
}

bool is_adapted(const Matrix& j, double tol) {
  const auto n = j.rows();
  if (n % 2 != 0) return false;
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Vector expected = Vector::Zero(n);
    expected[k + 1] = 1.0;
    if ((j.col(k) - expected).cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

StarCurvature star_curvature(const CurvatureData& curv, const Matrix& j) {
  require_dims(curv, j);
  if (!is_adapted(j)) fail(ErrorCode::NotAdapted, "star curvature needs an adapted frame");
  const int n = curv.dimension;
  const Tensor t = r_jj(curv.R, j);  // t(a, i, b, c) = R(e_a, J e_i, e_b, J e_c)
  StarCurvature s;
  s.star_ricci = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      double v = 0.0;
      for (int a = 0; a < n; ++a) v += t(a, i, k, a);
      s.star_ricci(i, k) = v;
    }
  s.star_scalar = s.star_ricci.trace();
  return s;
}

Tensor nabla_J(const ModelManifold& model, const ChartPoint& point) { return PointGeometry(model, point, 0).nabla_j(); }

std::vector<Polynomial> holomorphic_gradient_polynomials(const CurvatureData& curv, const Matrix& j) {
  require_dims(curv, j);
  // (1/4) dF/dv_a, which equals R(v, Jv, v, J e_a) when R is J-invariant.
  const Polynomial f = Polynomial::from_tensor(r_jj(curv.R, j));
  std::vector<Polynomial> q;
  for (int a = 0; a < curv.dimension; ++a) q.push_back(0.25 * f.partial(a));
  return q;
}

Polynomial gradv_sq_polynomial(const CurvatureData& curv, const Matrix& j) {
  const auto q = holomorphic_gradient_polynomials(curv, j);
  const Polynomial f = Polynomial::from_tensor(r_jj(curv.R, j));
  Polynomial out(curv.dimension);
  for (const auto& p : q) out += p * p;
  out -= f * f;
  return 16.0 * out;
}

std::vector<Polynomial> gradh_polynomials(const CurvatureData& curv, const Matrix& j, const Tensor& nabla_j) {
  require_dims(curv, j);
  if (!curv.dR) fail(ErrorCode::OrderUnsupported, "horizontal gradient needs the first covariant derivative of R");
  const int n = curv.dimension;
  const Tensor djj = curv.dR->transform_slot(1, j).transform_slot(3, j);
  std::vector<Polynomial> out;
  for (int i = 0; i < n; ++i) {
    Tensor first(n, 4);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) first(a, b, c, d) = djj(a, b, c, d, i);
    Matrix ni(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) ni(a, b) = nabla_j(i, a, b);
    const Tensor second = curv.R.transform_slot(1, ni).transform_slot(3, j);
    out.push_back(Polynomial::from_tensor(first) + 2.0 * Polynomial::from_tensor(second));
  }
  return out;
}

std::vector<std::vector<Polynomial>> fiber_curvature_polynomials(const CurvatureData& curv) {
  const int n = curv.dimension;
  std::vector<std::vector<Polynomial>> h(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      Tensor t(n, 2);
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) t(c, d) = curv.R(a, c, b, d);
      h[static_cast<std::size_t>(a)].push_back(Polynomial::from_tensor(t));
    }
  }
  return h;
}

Polynomial horizontal_laplacian_polynomial(const CurvatureData& curv, const Matrix& j) {
  require_dims(curv, j);
  if (!curv.d2R) fail(ErrorCode::OrderUnsupported, "horizontal Laplacian needs the second covariant derivative of R");
  const int n = curv.dimension;
  Tensor traced(n, 4);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double s = 0.0;
          for (int i = 0; i < n; ++i) s += (*curv.d2R)(a, b, c, d, i, i);
          traced(a, b, c, d) = s;
        }
  return Polynomial::from_tensor(traced.transform_slot(1, j).transform_slot(3, j));
}

}  // namespace kverify
