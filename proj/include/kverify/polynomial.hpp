#pragma once

// Sparse real polynomials in up to kMaxDimension variables.

#include <array>
#include <cstdint>
#include <map>
#include <optional>

#include "kverify/jet.hpp"
#include "kverify/tensor.hpp"

namespace kverify {

class Polynomial {
 public:
  using Exponent = std::array<std::uint8_t, kMaxDimension>;

  Polynomial() = default;
  explicit Polynomial(int dimension);

  static Polynomial constant(int dimension, double c);
  static Polynomial variable(int dimension, int i);
  // |v|^(2k)
  static Polynomial norm_power(int dimension, int k);
  // sum_{i1..ir} t(i1, .., ir) v_i1 ... v_ir for a rank-r tensor.
  static Polynomial from_tensor(const Tensor& t);

  int dimension() const noexcept { return n_; }
  const std::map<Exponent, double>& terms() const noexcept { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Exponent& e, double c);
  double coefficient(const Exponent& e) const;

  // Highest total degree; -1 for the zero polynomial.
  int degree() const;
  // Degree if every term has the same total degree.
  std::optional<int> homogeneous_degree() const;

  double evaluate(const Vector& v) const;
  Polynomial partial(int i) const;
  Polynomial laplacian() const;

  // Drops terms with |c| <= threshold * max |c|.
  Polynomial pruned(double threshold) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(double s);

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

 private:
  void check(const Polynomial& o) const;

  int n_ = 0;
  std::map<Exponent, double> terms_;
};

Polynomial operator+(Polynomial a, const Polynomial& b);
Polynomial operator-(Polynomial a, const Polynomial& b);
Polynomial operator*(Polynomial a, double s);
Polynomial operator*(double s, Polynomial a);
Polynomial operator*(const Polynomial& a, const Polynomial& b);

int total_degree(const Polynomial::Exponent& e);

}  // namespace kverify
