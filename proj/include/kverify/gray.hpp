#pragma once

// Gradient lifts of H to the unit sphere bundle, Gray's L operator on H and
// H^2, and the curvature identities of Kahler-Einstein surfaces.
//
// Unit tangents are given in frame components of a PointGeometry. The
// horizontal part of L is taken as sum_i (nabla^2_{e_i e_i} R)(x, Jx, x, Jx),
// which is the horizontal Laplacian of H only when J is parallel; functions
// that rely on it raise NotKahler otherwise.

#include <cstdint>
#include <random>
#include <vector>

#include "kverify/fiber.hpp"
#include "kverify/hermitian.hpp"
#include "kverify/report.hpp"

namespace kverify {

struct UnitTangent {
  ChartPoint base;
  Vector x;  // unit, frame components in the seedless frame at base
};

UnitTangent sample_unit_tangent(const ModelManifold& model, std::mt19937_64& rng);

// Fiber-sphere gradient of H: 4 W(x, x, x, .) minus its x component. On Kahler
// models this is 4 sum_{i>=2} R(x, Jx, x, J e_i) e_i with e_1 = x.
Vector grad_v_H(const PointGeometry& geo, const Vector& x);
// Component i: (nabla_{e_i} R)(x, Jx, x, Jx) + 2 R(x, (nabla_{e_i} J) x, x, Jx). Needs dR.
Vector grad_h_H(const PointGeometry& geo, const Vector& x);

// L(H) and L(H^2) at (p, x) from an explicit orthonormal completion of x. Need d2R.
double L_apply_H(const PointGeometry& geo, const Vector& x);
double L_apply_H2(const PointGeometry& geo, const Vector& x);

// The same operators as fiber polynomials, valid on the unit sphere.
Polynomial L_H_polynomial(const PointGeometry& geo);
Polynomial L_H2_polynomial(const PointGeometry& geo);

struct Lemma23Sides {
  double lhs = 0.0;             // L(H^2)
  double horizontal = 0.0;      // 2 |grad^h H|^2
  double curvature = 0.0;       // R(x, G, x, G), G = grad^v H
  double sec_form = 0.0;        // sec(x, G) |G|^2
};

Lemma23Sides lemma23_sides(const PointGeometry& geo, const Vector& x);
VerificationReport lemma23_check(const PointGeometry& geo, const Vector& x, const std::string& model_name, double tol);
// Fiber integral of L(H^2) on a homogeneous Kahler-Einstein model.
VerificationReport lemma23_integral_check(const ModelManifold& model, double tol, std::uint64_t seed = 0);

// Trace identity at ut, the Laplacian expression at the fiber maximizer of H,
// and (on products of surfaces) the polarization expansion at a random zeta.
std::vector<VerificationReport> surface_identities(const ModelManifold& model, const UnitTangent& ut, double tol,
                                                   std::uint64_t seed = 0);

}  // namespace kverify
