#include "kverify/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "kverify/error.hpp"

namespace kverify {

namespace {

// Flat storage for jet-valued tensors, last index fastest.
class JetTensor {
 public:
  JetTensor(const JetSpace& space, int n, int rank) : n_(n) {
    std::size_t count = 1;
    for (int r = 0; r < rank; ++r) count *= static_cast<std::size_t>(n);
    data_.assign(count, Jet(space, 0.0));
  }

  template <typename... I>
  Jet& operator()(I... idx) {
    return data_[offset(idx...)];
  }
  template <typename... I>
  const Jet& operator()(I... idx) const {
    return data_[offset(idx...)];
  }

  Tensor values(int rank) const {
    Tensor t(n_, rank);
    for (std::size_t k = 0; k < data_.size(); ++k) t.data()[k] = data_[k].value();
    return t;
  }

 private:
  template <typename... I>
  std::size_t offset(I... idx) const {
    std::size_t off = 0;
    ((off = off * static_cast<std::size_t>(n_) + static_cast<std::size_t>(idx)), ...);
    return off;
  }

  int n_;
  std::vector<Jet> data_;
};

Matrix values_of(const JetMatrix& m) {
  const int n = m.rows();
  Matrix out(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out(i, j) = m(i, j).value();
  }
  return out;
}

double inner(const Matrix& g, const Vector& u, const Vector& v) { return u.dot(g * v); }

}  // namespace

MetricJet metric_jet(const ModelManifold& model, const ChartPoint& point, int order) {
  if (order < 0 || order > kMaxJetOrder) {
    fail(ErrorCode::OrderUnsupported, "metric jets are available up to order 4, requested " + std::to_string(order));
  }
  return MetricJet{order, model.metric(point, order)};
}

Frame build_frame(const Matrix& g, const std::optional<Matrix>& j, const std::optional<Vector>& seed) {
  const int n = static_cast<int>(g.rows());
  Eigen::LLT<Matrix> llt(0.5 * (g + g.transpose()));
  if (llt.info() != Eigen::Success) fail(ErrorCode::DegenerateMetric, "metric is not positive definite");
  if (j && n % 2 != 0) fail(ErrorCode::InvalidArgument, "almost complex structure on an odd-dimensional space");

  std::vector<Vector> basis;
  auto orthogonalize = [&](Vector w) {
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vector& e : basis) w -= inner(g, w, e) * e;
    }
    return w;
  };
  auto try_push = [&](const Vector& v, bool required) {
    const double scale = std::sqrt(std::max(inner(g, v, v), 0.0));
    const Vector w = orthogonalize(v);
    const double len = std::sqrt(std::max(inner(g, w, w), 0.0));
    if (len <= 1e-10 * scale || len == 0.0) {
      if (required) fail(ErrorCode::InvalidArgument, "seed vector is numerically zero");
      return false;
    }
    basis.push_back(w / len);
    if (j) {
      const Vector jw = orthogonalize(*j * basis.back());
      const double jl = std::sqrt(std::max(inner(g, jw, jw), 0.0));
      if (jl < 1e-10) fail(ErrorCode::DegenerateMetric, "J e is degenerate");
      basis.push_back(jw / jl);
    }
    return true;
  };

  if (seed) {
    if (seed->size() != n) fail(ErrorCode::InvalidArgument, "seed vector has the wrong dimension");
    if (!(std::sqrt(std::max(inner(g, *seed, *seed), 0.0)) > 1e-14)) {
      fail(ErrorCode::InvalidArgument, "seed vector is numerically zero");
    }
    try_push(*seed, true);
  }
  for (int k = 0; k < n && static_cast<int>(basis.size()) < n; ++k) {
    try_push(Vector::Unit(n, k), false);
  }
  if (static_cast<int>(basis.size()) != n) fail(ErrorCode::DegenerateMetric, "could not complete an orthonormal frame");

  Frame frame;
  frame.vectors.resize(n, n);
  for (int a = 0; a < n; ++a) frame.vectors.col(a) = basis[static_cast<std::size_t>(a)];
  frame.adapted = j.has_value();
  return frame;
}

Frame build_frame(const ModelManifold& model, const ChartPoint& point, const std::optional<Vector>& seed) {
  return build_frame(model.metric_value(point), model.complex_structure_value(point), seed);
}

PointGeometry::PointGeometry(const ModelManifold& model, const ChartPoint& point, int deriv_order,
                             const std::optional<Vector>& seed)
    : point_(point) {
  if (deriv_order < 0 || deriv_order > 2) {
    fail(ErrorCode::OrderUnsupported, "curvature derivatives are available up to order 2");
  }
  const int n = model.dimension();
  const int order = deriv_order + 2;
  const JetMatrix g = model.metric(point, order);
  const JetSpace& space = g(0, 0).space();
  metric_ = values_of(g);
  Eigen::LLT<Matrix> llt(metric_);
  if (llt.info() != Eigen::Success) fail(ErrorCode::DegenerateMetric, "metric is not positive definite");
  const JetMatrix ginv = g.inverse();

  // dg(k, i, j) = d_k g_ij
  JetTensor dg(space, n, 3);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        dg(k, i, j) = g(i, j).partial(k);
        if (i != j) dg(k, j, i) = dg(k, i, j);
      }
    }
  }

  // Gamma(i, j, k) = Gamma^i_{jk} = 1/2 g^{il} (d_j g_lk + d_k g_lj - d_l g_jk)
  JetTensor gamma(space, n, 3);
  {
    JetTensor lowered(space, n, 3);  // Gamma_{l, jk}
    for (int l = 0; l < n; ++l) {
      for (int j = 0; j < n; ++j) {
        for (int k = j; k < n; ++k) {
          Jet v = dg(j, l, k) + dg(k, l, j) - dg(l, j, k);
          v *= 0.5;
          lowered(l, j, k) = v;
          if (j != k) lowered(l, k, j) = lowered(l, j, k);
        }
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = j; k < n; ++k) {
          Jet v(space, 0.0);
          for (int l = 0; l < n; ++l) v += ginv(i, l) * lowered(l, j, k);
          gamma(i, j, k) = v;
          if (j != k) gamma(i, k, j) = gamma(i, j, k);
        }
      }
    }
  }
  christoffel_ = gamma.values(3);

  // Standard R^i_{jkl} = d_k Gamma^i_{lj} - d_l Gamma^i_{kj} + Gamma^i_{km} Gamma^m_{lj} - Gamma^i_{lm} Gamma^m_{kj},
  // then R_{abcd} = g_{ci} R^i_{dab}.
  JetTensor up(space, n, 4);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = k + 1; l < n; ++l) {
          Jet v = gamma(i, l, j).partial(k) - gamma(i, k, j).partial(l);
          for (int m = 0; m < n; ++m) {
            v += gamma(i, k, m) * gamma(m, l, j) - gamma(i, l, m) * gamma(m, k, j);
          }
          up(i, j, k, l) = v;
          up(i, j, l, k) = -v;
        }
      }
    }
  }
  JetTensor riem(space, n, 4);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        for (int d = 0; d < n; ++d) {
          Jet v(space, 0.0);
          for (int i = 0; i < n; ++i) v += g(c, i) * up(i, d, a, b);
          riem(a, b, c, d) = v;
        }
      }
    }
  }
  coordinate_riemann_ = riem.values(4);

  std::optional<Matrix> j_chart;
  std::optional<JetMatrix> j_jet;
  if (model.has_complex_structure()) {
    j_jet = model.complex_structure(point, 1);
    j_chart = values_of(*j_jet);
  }
  frame_ = build_frame(metric_, j_chart, seed);
  const Matrix& e = frame_.vectors;

  curvature_.dimension = n;
  curvature_.deriv_order = deriv_order;
  curvature_.R = coordinate_riemann_.change_basis(e);

  if (deriv_order >= 1) {
    // (nabla_e R)_{abcd} = d_e R_abcd - Gamma^m_{ea} R_mbcd - Gamma^m_{eb} R_amcd - Gamma^m_{ec} R_abmd - Gamma^m_{ed} R_abcm
    JetTensor dr(space, n, 5);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        for (int c = 0; c < n; ++c) {
          for (int d = 0; d < n; ++d) {
            for (int x = 0; x < n; ++x) {
              Jet v = riem(a, b, c, d).partial(x);
              for (int m = 0; m < n; ++m) {
                v -= gamma(m, x, a) * riem(m, b, c, d);
                v -= gamma(m, x, b) * riem(a, m, c, d);
                v -= gamma(m, x, c) * riem(a, b, m, d);
                v -= gamma(m, x, d) * riem(a, b, c, m);
              }
              dr(a, b, c, d, x) = v;
            }
          }
        }
      }
    }
    curvature_.dR = dr.values(5).change_basis(e);

    if (deriv_order >= 2) {
      const Tensor dr0 = dr.values(5);
      const Tensor& gm = christoffel_;
      Tensor d2(n, 6);
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          for (int c = 0; c < n; ++c) {
            for (int d = 0; d < n; ++d) {
              for (int x = 0; x < n; ++x) {
                for (int y = 0; y < n; ++y) {
                  double v = dr(a, b, c, d, x).partial(y).value();
                  for (int m = 0; m < n; ++m) {
                    v -= gm(m, y, a) * dr0(m, b, c, d, x);
                    v -= gm(m, y, b) * dr0(a, m, c, d, x);
                    v -= gm(m, y, c) * dr0(a, b, m, d, x);
                    v -= gm(m, y, d) * dr0(a, b, c, m, x);
                    v -= gm(m, y, x) * dr0(a, b, c, d, m);
                  }
                  d2(a, b, c, d, x, y) = v;
                }
              }
            }
          }
        }
      }
      curvature_.d2R = d2.change_basis(e);
    }
  }

  const Tensor& r = curvature_.R;
  curvature_.ricci = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int a = 0; a < n; ++a) s += r(a, i, a, j);
      curvature_.ricci(i, j) = s;
    }
  }
  curvature_.scalar = curvature_.ricci.trace();

  if (j_chart) {
    const Matrix e_inv = e.transpose() * metric_;
    j_frame_ = e_inv * (*j_chart) * e;
    // (nabla_k J)^i_j = d_k J^i_j + Gamma^i_{km} J^m_j - Gamma^m_{kj} J^i_m
    Tensor nj(n, 3);  // (k, i, j)
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        for (int jj = 0; jj < n; ++jj) {
          double v = (*j_jet)(i, jj).partial(k).value();
          for (int m = 0; m < n; ++m) {
            v += christoffel_(i, k, m) * (*j_chart)(m, jj) - christoffel_(m, k, jj) * (*j_chart)(i, m);
          }
          nj(k, i, jj) = v;
        }
      }
    }
    Tensor out(n, 3);
    for (int c = 0; c < n; ++c) {
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          double v = 0.0;
          for (int k = 0; k < n; ++k) {
            if (e(k, c) == 0.0) continue;
            for (int i = 0; i < n; ++i) {
              if (e_inv(a, i) == 0.0) continue;
              for (int jj = 0; jj < n; ++jj) v += e(k, c) * e_inv(a, i) * nj(k, i, jj) * e(jj, b);
            }
          }
          out(c, a, b) = v;
        }
      }
    }
    nabla_j_ = std::move(out);
  }
}

const Matrix& PointGeometry::complex_structure() const {
  if (!j_frame_) fail(ErrorCode::InvalidArgument, "model carries no almost complex structure");
  return *j_frame_;
}

const Tensor& PointGeometry::nabla_j() const {
  if (!nabla_j_) fail(ErrorCode::InvalidArgument, "model carries no almost complex structure");
  return *nabla_j_;
}

Vector PointGeometry::to_frame(const Vector& chart_components) const {
  return frame_.vectors.transpose() * (metric_ * chart_components);
}

CurvatureData curvature(const ModelManifold& model, const ChartPoint& point, int deriv_order) {
  return PointGeometry(model, point, deriv_order).curvature();
}

double sectional(const CurvatureData& curv, const Vector& x, const Vector& y) {
  if (x.size() != curv.dimension || y.size() != curv.dimension) {
    fail(ErrorCode::InvalidArgument, "vector dimension does not match curvature data");
  }
  const double xx = x.squaredNorm();
  const double yy = y.squaredNorm();
  const double xy = x.dot(y);
  const double den = xx * yy - xy * xy;
  if (!(den > 1e-14 * xx * yy) || xx == 0.0 || yy == 0.0) {
    fail(ErrorCode::InvalidArgument, "sectional curvature of a degenerate plane");
  }
  return contract4(curv.R, x, y, x, y) / den;
}

double einstein_constant(const ModelManifold& model, int sample_count, double tol, std::uint64_t seed) {
  if (sample_count < 1) fail(ErrorCode::InvalidArgument, "sample_count must be at least 1");
  std::mt19937_64 rng(seed);
  std::vector<ChartPoint> points;
  std::vector<Matrix> ricci;
  double sum = 0.0;
  const int n = model.dimension();
  for (int k = 0; k < sample_count; ++k) {
    points.push_back(model.sample_point(rng));
    const CurvatureData c = curvature(model, points.back(), 0);
    ricci.push_back(c.ricci);
    sum += c.scalar / n;
  }
  const double lambda = sum / sample_count;
  double worst = 0.0;
  std::size_t witness = 0;
  for (std::size_t k = 0; k < ricci.size(); ++k) {
    const double dev = (ricci[k] - lambda * Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (dev > worst) {
      worst = dev;
      witness = k;
    }
  }
  if (worst > tol) {
    throw NotEinsteinError("max |Ric - Lambda g| = " + std::to_string(worst) + " exceeds tolerance", worst,
                           points[witness]);
  }
  return lambda;
}

namespace {

void orthonormalize(Vector& x, Vector& y) {
  x.normalize();
  y -= y.dot(x) * x;
  y -= y.dot(x) * x;
  y.normalize();
}

// Maximizes sign * R(x, y, x, y) over orthonormal pairs. Each half step solves
// the exact maximization over one vector with the other fixed (a symmetric
// eigenproblem on its orthogonal complement), so the value never decreases.
double ascend_plane(const Tensor& r, Vector x, Vector y, double sign) {
  const int n = r.dim();
  orthonormalize(x, y);
  // m(b, d) = sum R(a, b, c, d) u_a u_c
  auto form = [&](const Vector& u) {
    Matrix m = Matrix::Zero(n, n);
    for (int a = 0; a < n; ++a) {
      if (u[a] == 0.0) continue;
      for (int c = 0; c < n; ++c) {
        const double w = u[a] * u[c];
        if (w == 0.0) continue;
        for (int b = 0; b < n; ++b)
          for (int d = 0; d < n; ++d) m(b, d) += w * r(a, b, c, d);
      }
    }
    return Matrix(sign * 0.5 * (m + m.transpose()));
  };
  auto best_partner = [&](const Vector& u, const Vector& current) {
    Eigen::HouseholderQR<Matrix> qr(u);
    const Matrix q = qr.householderQ();
    const Matrix basis = q.rightCols(n - 1);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(basis.transpose() * form(u) * basis);
    Vector v = basis * eig.eigenvectors().col(n - 2);
    if (v.dot(current) < 0.0) v = -v;
    return Vector(v.normalized());
  };
  auto gradient_norm = [&]() {
    Vector gx = 2.0 * form(y) * x;
    Vector gy = 2.0 * form(x) * y;
    gx -= gx.dot(x) * x + gx.dot(y) * y;
    gy -= gy.dot(x) * x + gy.dot(y) * y;
    return std::sqrt(gx.squaredNorm() + gy.squaredNorm());
  };
  double f = sign * contract4(r, x, y, x, y);
  for (int iter = 0; iter < 10000; ++iter) {
    const double gnorm = gradient_norm();
    if (gnorm < 1e-8) return sign * f;
    y = best_partner(x, y);
    x = best_partner(y, x);
    orthonormalize(x, y);
    const double fn = sign * contract4(r, x, y, x, y);
    if (fn <= f + 1e-15 * (1.0 + std::abs(f)) && gnorm < 1e-6) return sign * std::max(f, fn);
    f = std::max(f, fn);
  }
  fail(ErrorCode::NonConvergence, "Grassmannian ascent hit the iteration cap");
}

}  // namespace

SectionalRange sectional_range(const Tensor& r, int restarts, std::uint64_t seed) {
  if (restarts < 1) fail(ErrorCode::InvalidArgument, "restarts must be at least 1");
  const int n = r.dim();
  if (n < 2) return {};
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SectionalRange range{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (int k = 0; k < restarts; ++k) {
    Vector x(n), y(n);
    for (int i = 0; i < n; ++i) x[i] = normal(rng);
    for (int i = 0; i < n; ++i) y[i] = normal(rng);
    range.max = std::max(range.max, ascend_plane(r, x, y, 1.0));
    range.min = std::min(range.min, ascend_plane(r, x, y, -1.0));
  }
  return range;
}

double max_abs_sec(const ModelManifold& model, int restarts, std::uint64_t seed) {
  std::vector<ChartPoint> points;
  if (model.metadata().homogeneous) {
    points.push_back(model.origin());
  } else {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    for (int k = 0; k < 8; ++k) points.push_back(model.sample_point(rng));
  }
  double best = 0.0;
  for (const auto& p : points) {
    const SectionalRange range = sectional_range(curvature(model, p, 0).R, restarts, seed);
    best = std::max({best, std::abs(range.min), std::abs(range.max)});
  }
  return best;
}

void verify_model_metadata(const ModelManifold& model) {
  const ModelMetadata& meta = model.metadata();
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = model.dimension();
  for (int k = 0; k < 3; ++k) {
    const ChartPoint p = model.sample_point(rng);
    const PointGeometry geo(model, p, 0);
    const CurvatureData& c = geo.curvature();
    if (meta.einstein_constant) {
      const double dev = (c.ricci - *meta.einstein_constant * Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
      if (dev > 1e-8) {
        fail(ErrorCode::Internal, model.name() + ": declared Einstein constant off by " + std::to_string(dev));
      }
    }
    if (meta.constant_h && geo.has_complex_structure()) {
      for (int t = 0; t < 4; ++t) {
        Vector x(n);
        for (int i = 0; i < n; ++i) x[i] = normal(rng);
        x.normalize();
        const Vector jx = geo.complex_structure() * x;
        const double h = contract4(c.R, x, jx, x, jx);
        if (std::abs(h - *meta.constant_h) > 1e-8) {
          fail(ErrorCode::Internal, model.name() + ": declared holomorphic curvature off by " +
                                        std::to_string(std::abs(h - *meta.constant_h)));
        }
      }
    }
    if (meta.kahler && geo.has_complex_structure() && geo.nabla_j().max_abs() > 1e-8) {
      fail(ErrorCode::Internal, model.name() + ": declared Kahler but nabla J does not vanish");
    }
  }
}

}  // namespace kverify
