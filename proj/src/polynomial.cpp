#include "kverify/polynomial.hpp"

#include <cmath>
#include <string>

#include "kverify/error.hpp"

namespace kverify {

int total_degree(const Polynomial::Exponent& e) {
  int d = 0;
  for (auto k : e) d += k;
  return d;
}

Polynomial::Polynomial(int dimension) : n_(dimension) {
  if (dimension < 1 || dimension > kMaxDimension) {
    fail(ErrorCode::InvalidArgument, "polynomial dimension out of range: " + std::to_string(dimension));
  }
}

Polynomial Polynomial::constant(int dimension, double c) {
  Polynomial p(dimension);
  p.add_term(Exponent{}, c);
  return p;
}

Polynomial Polynomial::variable(int dimension, int i) {
  Polynomial p(dimension);
  Exponent e{};
  e[static_cast<std::size_t>(i)] = 1;
  p.add_term(e, 1.0);
  return p;
}

Polynomial Polynomial::norm_power(int dimension, int k) {
  Polynomial sq(dimension);
  for (int i = 0; i < dimension; ++i) {
    Exponent e{};
    e[static_cast<std::size_t>(i)] = 2;
    sq.add_term(e, 1.0);
  }
  Polynomial out = constant(dimension, 1.0);
  for (int j = 0; j < k; ++j) out = out * sq;
  return out;
}

Polynomial Polynomial::from_tensor(const Tensor& t) {
  const int n = t.dim();
  const int r = t.rank();
  Polynomial p(n);
  std::vector<int> idx(static_cast<std::size_t>(r), 0);
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double c = t.data()[k];
    if (c != 0.0) {
      Exponent e{};
      for (int s : idx) ++e[static_cast<std::size_t>(s)];
      p.terms_[e] += c;
    }
    for (int s = r - 1; s >= 0; --s) {
      if (++idx[static_cast<std::size_t>(s)] < n) break;
      idx[static_cast<std::size_t>(s)] = 0;
    }
  }
  return p;
}

void Polynomial::add_term(const Exponent& e, double c) {
  if (c == 0.0) return;
  terms_[e] += c;
}

double Polynomial::coefficient(const Exponent& e) const {
  const auto it = terms_.find(e);
  return it == terms_.end() ? 0.0 : it->second;
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
  return d;
}

std::optional<int> Polynomial::homogeneous_degree() const {
  std::optional<int> d;
  for (const auto& [e, c] : terms_) {
    if (c == 0.0) continue;
    const int k = total_degree(e);
    if (d && *d != k) return std::nullopt;
    d = k;
  }
  return d;
}

double Polynomial::evaluate(const Vector& v) const {
  if (v.size() != n_) fail(ErrorCode::InvalidArgument, "polynomial evaluated at a vector of the wrong size");
  double total = 0.0;
  for (const auto& [e, c] : terms_) {
    double m = c;
    for (int i = 0; i < n_; ++i) {
      for (int k = 0; k < e[static_cast<std::size_t>(i)]; ++k) m *= v[i];
    }
    total += m;
  }
  return total;
}

Polynomial Polynomial::partial(int i) const {
  Polynomial out(n_);
  const auto s = static_cast<std::size_t>(i);
  for (const auto& [e, c] : terms_) {
    if (e[s] == 0) continue;
    Exponent f = e;
    --f[s];
    out.terms_[f] += c * e[s];
  }
  return out;
}

Polynomial Polynomial::laplacian() const {
  Polynomial out(n_);
  for (const auto& [e, c] : terms_) {
    for (std::size_t s = 0; s < static_cast<std::size_t>(n_); ++s) {
      if (e[s] < 2) continue;
      Exponent f = e;
      f[s] = static_cast<std::uint8_t>(f[s] - 2);
      out.terms_[f] += c * e[s] * (e[s] - 1);
    }
  }
  return out;
}

Polynomial Polynomial::pruned(double threshold) const {
  double m = 0.0;
  for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
  Polynomial out(n_);
  for (const auto& [e, c] : terms_) {
    if (std::abs(c) > threshold * m) out.terms_[e] = c;
  }
  return out;
}

void Polynomial::check(const Polynomial& o) const {
  if (o.n_ != n_) fail(ErrorCode::InvalidArgument, "polynomial dimensions differ");
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  check(o);
  for (const auto& [e, c] : o.terms_) terms_[e] += c;
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  check(o);
  for (const auto& [e, c] : o.terms_) terms_[e] -= c;
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.check(b);
  Polynomial out(a.n_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      Polynomial::Exponent e;
      for (std::size_t s = 0; s < e.size(); ++s) e[s] = static_cast<std::uint8_t>(ea[s] + eb[s]);
      out.terms_[e] += ca * cb;
    }
  }
  return out;
}

Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
Polynomial operator*(Polynomial a, double s) { return a *= s; }
Polynomial operator*(double s, Polynomial a) { return a *= s; }

}  // namespace kverify
