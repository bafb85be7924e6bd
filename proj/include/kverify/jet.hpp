#pragma once

// Truncated multivariate Taylor arithmetic.
//
// A Jet stores the Taylor coefficients c_alpha = (d^alpha f)(p) / alpha! of a
// function of `dimension` variables around a fixed point, for all multi-indices
// with |alpha| <= order. Arithmetic on jets propagates exact derivatives up to
// the truncation order, which is how metric evaluators produce the fourth
// derivatives needed for second covariant derivatives of curvature.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace kverify {

inline constexpr int kMaxJetOrder = 4;
inline constexpr int kMaxDimension = 8;

// Monomial bookkeeping for one (dimension, order) pair. Instances are shared
// and immutable; obtain them through JetSpace::get.
class JetSpace {
 public:
  struct Product {
    std::uint32_t lhs;
    std::uint32_t rhs;
    std::uint32_t out;
  };

  static const JetSpace& get(int dimension, int order);

  int dimension() const noexcept { return dimension_; }
  int order() const noexcept { return order_; }
  std::size_t size() const noexcept { return degree_.size(); }

  int degree(std::size_t k) const { return degree_[k]; }
  std::span<const std::uint8_t> exponent(std::size_t k) const;
  std::size_t index(std::span<const int> exponent) const;
  std::size_t variable_index(int variable) const;

  // Number of monomials with degree <= d.
  std::size_t count_up_to(int d) const { return count_up_to_[static_cast<std::size_t>(d)]; }

  // Coefficient pairs whose product lands at degree <= max_degree.
  std::span<const Product> products(int max_degree) const;

  // Partial derivative table: entry k gives the source monomial alpha + e_l of
  // output monomial alpha and the factor (alpha_l + 1). Source is npos when
  // alpha + e_l exceeds the order.
  struct Shift {
    std::size_t source;
    double factor;
  };
  std::span<const Shift> partial_table(int variable) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  JetSpace(int dimension, int order);

 private:
  std::size_t pack(std::span<const std::uint8_t> e) const;

  int dimension_;
  int order_;
  std::vector<std::uint8_t> exponents_;  // size() * dimension_
  std::vector<int> degree_;
  std::vector<std::size_t> count_up_to_;
  std::vector<std::int32_t> dense_index_;  // packed exponent -> monomial index
  std::vector<Product> products_;          // sorted by output degree
  std::vector<std::size_t> products_up_to_;
  std::vector<std::vector<Shift>> partials_;
};

class Jet {
 public:
  Jet() = default;
  Jet(const JetSpace& space, double value);

  static Jet variable(const JetSpace& space, int variable, double value);
  // Builds a jet from Taylor coefficients in the space's monomial order.
  static Jet from_coefficients(const JetSpace& space, std::vector<double> coefficients, int valid);

  const JetSpace& space() const { return *space_; }
  double value() const { return c_[0]; }
  int valid_order() const noexcept { return valid_; }

  // Taylor coefficient of the monomial with the given exponent.
  double coefficient(std::span<const int> exponent) const;
  // Partial derivative d^alpha f at the expansion point.
  double derivative(std::span<const int> exponent) const;
  double coefficient_at(std::size_t k) const { return c_[k]; }

  Jet partial(int variable) const;

  Jet& operator+=(const Jet& other);
  Jet& operator-=(const Jet& other);
  Jet& operator*=(const Jet& other);
  Jet& operator+=(double s);
  Jet& operator-=(double s);
  Jet& operator*=(double s);
  Jet& operator/=(double s);

  Jet operator-() const;

  // Evaluates f(x) where taylor[k] = f^(k)(x0) / k! and x0 = value().
  Jet compose(std::span<const double> taylor) const;

 private:
  void truncate();

  friend Jet operator*(const Jet& a, const Jet& b);

  const JetSpace* space_ = nullptr;
  std::vector<double> c_;
  int valid_ = 0;
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator+(Jet a, double s);
Jet operator+(double s, Jet a);
Jet operator-(Jet a, double s);
Jet operator-(double s, const Jet& a);
Jet operator*(Jet a, double s);
Jet operator*(double s, Jet a);
Jet operator/(Jet a, double s);
Jet operator/(double s, const Jet& a);

Jet reciprocal(const Jet& x);
Jet exp(const Jet& x);
Jet log(const Jet& x);
Jet sqrt(const Jet& x);
Jet pow(const Jet& x, double p);
Jet square(const Jet& x);

// Row-major square matrix of jets.
class JetMatrix {
 public:
  JetMatrix() = default;
  JetMatrix(const JetSpace& space, int n, double fill = 0.0);

  int rows() const noexcept { return n_; }
  Jet& operator()(int i, int j) { return data_[static_cast<std::size_t>(i * n_ + j)]; }
  const Jet& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i * n_ + j)]; }

  JetMatrix inverse() const;

 private:
  int n_ = 0;
  std::vector<Jet> data_;
};

}  // namespace kverify
