#include "kverify/gray.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "kverify/error.hpp"

namespace kverify {

namespace {

void require_unit(const Vector& x) {
  if (std::abs(x.norm() - 1.0) > 1e-10) fail(ErrorCode::InvalidArgument, "unit tangent must have norm 1");
}

void require_kahler(const PointGeometry& geo) {
  if (geo.nabla_j().max_abs() > 1e-8) {
    fail(ErrorCode::NotKahler, "L operator evaluation assumes a parallel complex structure");
  }
}

void require_order(const PointGeometry& geo, int order) {
  if (geo.curvature().deriv_order < order) {
    fail(ErrorCode::OrderUnsupported, "curvature was computed without the covariant derivatives this needs");
  }
}

// Columns 1..n-1 complete x to an orthonormal basis.
Matrix completion(const Vector& x) {
  const auto n = x.size();
  Eigen::HouseholderQR<Matrix> qr(x);
  const Matrix q = qr.householderQ();
  return q.rightCols(n - 1);
}

// T(a, b, c, d) contracted with (u, Ju, u, Ju) in its first four slots, for each trailing index.
Vector contract_holomorphic(const Tensor& t5, const Vector& u, const Vector& ju) {
  const int n = t5.dim();
  Vector out = Vector::Zero(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const double w = u[a] * ju[b] * u[c];
        if (w == 0.0) continue;
        for (int d = 0; d < n; ++d) {
          if (ju[d] == 0.0) continue;
          for (int e = 0; e < n; ++e) out[e] += w * ju[d] * t5(a, b, c, d, e);
        }
      }
  return out;
}

// Matrix h(a, b) = R(e_a, x, e_b, x).
Matrix fiber_curvature(const Tensor& r, const Vector& x) {
  const int n = r.dim();
  Matrix h = Matrix::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double s = 0.0;
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) s += r(a, c, b, d) * x[c] * x[d];
      h(a, b) = s;
    }
  return h;
}

// Ambient Hessian 12 W(x, x, ., .) of F.
Matrix quartic_hessian(const QuarticForm& form, const Vector& x) {
  const int n = form.dimension();
  Matrix m = Matrix::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const double w = x[a] * x[b];
      if (w == 0.0) continue;
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) m(c, d) += w * form.W(a, b, c, d);
    }
  return 12.0 * m;
}

double horizontal_laplacian(const PointGeometry& geo, const Vector& x) {
  const CurvatureData& curv = geo.curvature();
  const int n = curv.dimension;
  const Vector jx = geo.complex_structure() * x;
  double s = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const double w = x[a] * jx[b] * x[c];
        if (w == 0.0) continue;
        for (int d = 0; d < n; ++d) {
          if (jx[d] == 0.0) continue;
          for (int i = 0; i < n; ++i) s += w * jx[d] * (*curv.d2R)(a, b, c, d, i, i);
        }
      }
  return s;
}

// (1/2) sum_{i,j>=2} h_ij (Hess f)_ij on the fiber sphere, with the ambient Hessian supplied.
double vertical_term(const Matrix& h, const Matrix& ambient_hessian, double radial, const Matrix& basis) {
  const Matrix hb = basis.transpose() * h * basis;
  const Matrix vb = basis.transpose() * ambient_hessian * basis -
                    radial * Matrix::Identity(basis.cols(), basis.cols());
  return 0.5 * (hb.cwiseProduct(vb)).sum();
}

}  // namespace

UnitTangent sample_unit_tangent(const ModelManifold& model, std::mt19937_64& rng) {
  UnitTangent ut;
  ut.base = model.sample_point(rng);
  std::normal_distribution<double> normal;
  ut.x.resize(model.dimension());
  for (int i = 0; i < model.dimension(); ++i) ut.x[i] = normal(rng);
  ut.x.normalize();
  return ut;
}

Vector grad_v_H(const PointGeometry& geo, const Vector& x) {
  require_unit(x);
  const Vector q = quartic_form(geo.curvature(), geo.complex_structure()).gradient(x);
  return q - q.dot(x) * x;
}

Vector grad_h_H(const PointGeometry& geo, const Vector& x) {
  require_unit(x);
  require_order(geo, 1);
  const CurvatureData& curv = geo.curvature();
  const Matrix& j = geo.complex_structure();
  const Tensor& nj = geo.nabla_j();
  const int n = curv.dimension;
  const Vector jx = j * x;
  Vector g = contract_holomorphic(*curv.dR, x, jx);
  for (int i = 0; i < n; ++i) {
    Matrix ni(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) ni(a, b) = nj(i, a, b);
    g[i] += 2.0 * contract4(curv.R, x, ni * x, x, jx);
  }
  return g;
}

double L_apply_H(const PointGeometry& geo, const Vector& x) {
  require_unit(x);
  require_order(geo, 2);
  require_kahler(geo);
  const CurvatureData& curv = geo.curvature();
  const QuarticForm form = quartic_form(curv, geo.complex_structure());
  const double f = form.evaluate(x);
  return horizontal_laplacian(geo, x) +
         vertical_term(fiber_curvature(curv.R, x), quartic_hessian(form, x), 4.0 * f, completion(x));
}

double L_apply_H2(const PointGeometry& geo, const Vector& x) {
  require_unit(x);
  require_order(geo, 2);
  require_kahler(geo);
  const CurvatureData& curv = geo.curvature();
  const QuarticForm form = quartic_form(curv, geo.complex_structure());
  const double f = form.evaluate(x);
  const Vector grad = form.gradient(x);
  const Matrix hess = 2.0 * grad * grad.transpose() + 2.0 * f * quartic_hessian(form, x);
  const Vector gh = grad_h_H(geo, x);
  const double horizontal = 2.0 * f * horizontal_laplacian(geo, x) + 2.0 * gh.squaredNorm();
  return horizontal + vertical_term(fiber_curvature(curv.R, x), hess, 8.0 * f * f, completion(x));
}

namespace {

// (1/2) sum_{a,b} h_ab (d_a d_b f - k f delta_ab); h annihilates v so the full sum equals the tangential one.
Polynomial vertical_polynomial(const CurvatureData& curv, const Polynomial& f, int k) {
  const int n = curv.dimension;
  const auto h = fiber_curvature_polynomials(curv);
  std::vector<Polynomial> grad;
  for (int a = 0; a < n; ++a) grad.push_back(f.partial(a));
  Polynomial out(n);
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      const Polynomial& hab = h[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      if (hab.is_zero()) continue;
      Polynomial second = grad[static_cast<std::size_t>(a)].partial(b);
      if (a == b) second -= static_cast<double>(k) * f;
      out += (a == b ? 0.5 : 1.0) * (hab * second);
    }
  }
  return out;
}

}  // namespace

Polynomial L_H_polynomial(const PointGeometry& geo) {
  require_order(geo, 2);
  require_kahler(geo);
  const CurvatureData& curv = geo.curvature();
  const Matrix& j = geo.complex_structure();
  const Polynomial f = quartic_form(curv, j).polynomial();
  return horizontal_laplacian_polynomial(curv, j) + vertical_polynomial(curv, f, 4);
}

Polynomial L_H2_polynomial(const PointGeometry& geo) {
  require_order(geo, 2);
  require_kahler(geo);
  const CurvatureData& curv = geo.curvature();
  const Matrix& j = geo.complex_structure();
  const Polynomial f = quartic_form(curv, j).polynomial();
  Polynomial out = 2.0 * (f * horizontal_laplacian_polynomial(curv, j));
  for (const auto& g : gradh_polynomials(curv, j, geo.nabla_j())) out += 2.0 * (g * g);
  out += vertical_polynomial(curv, f * f, 8);
  return out;
}

Lemma23Sides lemma23_sides(const PointGeometry& geo, const Vector& x) {
  Lemma23Sides s;
  s.lhs = L_apply_H2(geo, x);
  s.horizontal = 2.0 * grad_h_H(geo, x).squaredNorm();
  const Vector g = grad_v_H(geo, x);
  const Tensor& r = geo.curvature().R;
  s.curvature = contract4(r, x, g, x, g);
  const double gg = g.squaredNorm();
  s.sec_form = gg > 1e-24 ? sectional(geo.curvature(), x, g) * gg : 0.0;
  return s;
}

VerificationReport lemma23_check(const PointGeometry& geo, const Vector& x, const std::string& model_name,
                                 double tol) {
  const Lemma23Sides s = lemma23_sides(geo, x);
  auto r = make_report("lemma23.pointwise", model_name, geo.point(), s.lhs, s.horizontal + s.curvature, tol);
  char note[160];
  std::snprintf(note, sizeof note, "R(x,G,x,G)=%.6e sec(x,G)|G|^2=%.6e", s.curvature, s.sec_form);
  r.note = note;
  if (std::abs(s.curvature - s.sec_form) > tol * std::max(1.0, std::abs(s.curvature))) {
    r.note += " curvature forms disagree";
    r.pass = false;
  }
  return r;
}

VerificationReport lemma23_integral_check(const ModelManifold& model, double tol, std::uint64_t seed) {
  if (!model.has_complex_structure()) fail(ErrorCode::InvalidArgument, "model carries no almost complex structure");
  einstein_constant(model);
  const auto values = require_homogeneous(
      model,
      [&](const ChartPoint& p) {
        return std::vector<double>{integrate_fiber(L_H2_polynomial(PointGeometry(model, p, 2))).value};
      },
      5, 1e-8, seed);
  auto r = make_report("lemma23.fiber_integral", model.name(), std::nullopt, values[0], 0.0, tol);
  r.note = "integral over S(M) equals Vol(M) times this fiber integral";
  return r;
}

std::vector<VerificationReport> surface_identities(const ModelManifold& model, const UnitTangent& ut, double tol,
                                                   std::uint64_t seed) {
  if (model.dimension() != 4) fail(ErrorCode::InvalidArgument, "surface identities need n = 4");
  if (!model.has_complex_structure()) fail(ErrorCode::InvalidArgument, "model carries no almost complex structure");
  const double lambda = einstein_constant(model);
  std::vector<VerificationReport> out;
  const PointGeometry plain(model, ut.base, 0);
  require_kahler(plain);

  // (a) trace identity in the frame e_1 = x, e_2 = Jx.
  {
    const PointGeometry geo(model, ut.base, 0, plain.to_chart(ut.x));
    const Tensor& r = geo.curvature().R;
    const double h1 = r(0, 1, 0, 1);
    const double b12 = r(0, 1, 2, 3);
    auto rep = make_report("surface.trace", model.name(), ut.base, h1 + b12, lambda, tol);
    char note[96];
    std::snprintf(note, sizeof note, "H1=%.12g B12=%.12g", h1, b12);
    rep.note = note;
    out.push_back(rep);
  }

  // (b) Laplacian expression at the maximizer of H on the fiber.
  {
    const FiberMaximum top = fiber_max_H(quartic_form(plain.curvature(), plain.complex_structure()), 32, seed);
    const PointGeometry geo(model, ut.base, 2, plain.to_chart(top.argmax));
    const Tensor& r = geo.curvature().R;
    const double h1 = r(0, 1, 0, 1);
    const double b12 = r(0, 1, 2, 3);
    const double r1212 = r(0, 2, 0, 2);
    const double r12s12s = r(0, 3, 0, 3);
    const double r1212s = r(0, 2, 0, 3);
    const double expression = (h1 - b12) * b12 - 4.0 * r1212 * r12s12s + 4.0 * r1212s * r1212s;
    const Vector e1 = Vector::Unit(4, 0);
    auto rep = make_report("surface.laplacian_expression", model.name(), ut.base, expression,
                           horizontal_laplacian(geo, e1), tol);
    char note[160];
    std::snprintf(note, sizeof note, "at fiber max H=%.12g; rhs is the horizontal Laplacian of H", top.value);
    rep.note = note;
    out.push_back(rep);
  }

  // (c) polarization on a product of surfaces, in the factor-adapted frame.
  if (model.metadata().product_of_surfaces) {
    std::mt19937_64 rng(seed ^ 0x2545f4914f6cdd1dULL);
    std::normal_distribution<double> normal;
    Vector z(4);
    for (int i = 0; i < 4; ++i) z[i] = normal(rng);
    z.normalize();
    const Tensor& r = plain.curvature().R;
    const Matrix& j = plain.complex_structure();
    const double direct = contract4(r, z, j * z, z, j * z);
    const double h1 = r(0, 1, 0, 1);
    const double h2 = r(2, 3, 2, 3);
    const double w1 = z[0] * z[0] + z[1] * z[1];
    const double w2 = z[2] * z[2] + z[3] * z[3];
    const double expansion = w1 * w1 * h1 + w2 * w2 * h2;
    const double literal = (std::pow(z[0], 4) + std::pow(z[1], 4)) * h1 + (std::pow(z[2], 4) + std::pow(z[3], 4)) * h2;
    auto rep = make_report("surface.polarization", model.name(), ut.base, direct, expansion, tol);
    char note[160];
    std::snprintf(note, sizeof note, "(a1^2+a1*^2)^2 H1 + (a2^2+a2*^2)^2 H2; quartic-only form gives %.12g", literal);
    rep.note = note;
    out.push_back(rep);
  }
  return out;
}

}  // namespace kverify
