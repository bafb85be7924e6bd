#pragma once

// Almost Hermitian curvature quantities in adapted orthonormal frames.
//
// Frame J convention: column b of J holds the frame components of J e_b.

#include <vector>

#include "kverify/geometry.hpp"
#include "kverify/polynomial.hpp"

namespace kverify {

struct HermitianDiagnostics {
  double j_squared = 0.0;      // max |J^2 + I|
  double compatibility = 0.0;  // max |g(J e_a, J e_b) - g(e_a, e_b)|
  double nabla_j = 0.0;        // max |(nabla J)|
};

HermitianDiagnostics validate_hermitian(const ModelManifold& model, const ChartPoint& point);

// R(x, Jx, x, Jx); x must be a unit vector.
double holomorphic_sec(const CurvatureData& curv, const Matrix& j, const Vector& x);
// R(x, Jx, y, Jy); x and y must be unit vectors.
double bisectional(const CurvatureData& curv, const Matrix& j, const Vector& x, const Vector& y);

// Fully symmetric coefficients of F(v) = R(v, Jv, v, Jv).
struct QuarticForm {
  Tensor W;

  int dimension() const { return W.dim(); }
  double evaluate(const Vector& v) const { return contract4(W, v, v, v, v); }
  Vector gradient(const Vector& v) const;
  Polynomial polynomial() const { return Polynomial::from_tensor(W); }
};

QuarticForm quartic_form(const CurvatureData& curv, const Matrix& j);

struct StarCurvature {
  Matrix star_ricci;  // R*_ij = sum_a R(e_a, J e_i, e_j, J e_a)
  double star_scalar = 0.0;
};

StarCurvature star_curvature(const CurvatureData& curv, const Matrix& j);

// nabla_J(model, p)(c, a, b) = frame component a of (nabla_{e_c} J) e_b.
Tensor nabla_J(const ModelManifold& model, const ChartPoint& point);

// True when J e_{2k} = e_{2k+1} (zero based) to tolerance.
bool is_adapted(const Matrix& j, double tol = 1e-10);

// Fiber polynomials in the frame coefficients v of a tangent vector.

// Q_a(v) = (1/4) dF/dv_a, i.e. R(v, Jv, v, J e_a) on Kahler models; the vertical
// gradient of H is 4 (Q - H x) on the unit fiber.
std::vector<Polynomial> holomorphic_gradient_polynomials(const CurvatureData& curv, const Matrix& j);
// |grad^v H|^2 = 16 (sum_a Q_a^2 - F^2) on the unit fiber.
Polynomial gradv_sq_polynomial(const CurvatureData& curv, const Matrix& j);
// Component i: (nabla_{e_i} R)(v, Jv, v, Jv) + 2 R(v, (nabla_{e_i} J) v, v, Jv). Needs dR.
std::vector<Polynomial> gradh_polynomials(const CurvatureData& curv, const Matrix& j, const Tensor& nabla_j);
// h_ab(v) = R(e_a, v, e_b, v)
std::vector<std::vector<Polynomial>> fiber_curvature_polynomials(const CurvatureData& curv);
// sum_i (nabla^2_{e_i e_i} R)(v, Jv, v, Jv). Needs d2R.
Polynomial horizontal_laplacian_polynomial(const CurvatureData& curv, const Matrix& j);

}  // namespace kverify
