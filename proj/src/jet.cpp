#include "kverify/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "kverify/error.hpp"

namespace kverify {

namespace {

void enumerate_degree(int dimension, int degree, int position, std::vector<std::uint8_t>& current,
                      std::vector<std::uint8_t>& out) {
  if (position == dimension - 1) {
    current[static_cast<std::size_t>(position)] = static_cast<std::uint8_t>(degree);
    out.insert(out.end(), current.begin(), current.end());
    return;
  }
  for (int e = degree; e >= 0; --e) {
    current[static_cast<std::size_t>(position)] = static_cast<std::uint8_t>(e);
    enumerate_degree(dimension, degree - e, position + 1, current, out);
  }
}

}  // namespace

JetSpace::JetSpace(int dimension, int order) : dimension_(dimension), order_(order) {
  if (dimension < 1 || dimension > kMaxDimension) {
    fail(ErrorCode::InvalidArgument, "jet dimension out of range");
  }
  if (order < 0 || order > kMaxJetOrder) {
    fail(ErrorCode::OrderUnsupported, "jet order " + std::to_string(order) + " unsupported");
  }
  const auto dim = static_cast<std::size_t>(dimension);
  std::vector<std::uint8_t> current(dim, 0);
  for (int d = 0; d <= order; ++d) {
    enumerate_degree(dimension, d, 0, current, exponents_);
    count_up_to_.push_back(exponents_.size() / dim);
  }
  const std::size_t count = exponents_.size() / dim;
  degree_.resize(count);
  for (int d = 0, k = 0; d <= order; ++d) {
    for (; static_cast<std::size_t>(k) < count_up_to_[static_cast<std::size_t>(d)]; ++k) {
      degree_[static_cast<std::size_t>(k)] = d;
    }
  }

  std::size_t dense = 1;
  for (int i = 0; i < dimension; ++i) dense *= static_cast<std::size_t>(order + 1);
  dense_index_.assign(dense, -1);
  for (std::size_t k = 0; k < count; ++k) {
    dense_index_[pack(exponent(k))] = static_cast<std::int32_t>(k);
  }

  std::vector<std::uint8_t> sum(dim);
  for (std::size_t a = 0; a < count; ++a) {
    for (std::size_t b = 0; b < count; ++b) {
      if (degree_[a] + degree_[b] > order) continue;
      const auto ea = exponent(a);
      const auto eb = exponent(b);
      for (std::size_t i = 0; i < dim; ++i) sum[i] = static_cast<std::uint8_t>(ea[i] + eb[i]);
      products_.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
                           static_cast<std::uint32_t>(dense_index_[pack(sum)])});
    }
  }
  std::stable_sort(products_.begin(), products_.end(), [this](const Product& x, const Product& y) {
    return degree_[x.out] < degree_[y.out];
  });
  for (int d = 0; d <= order; ++d) {
    const auto it = std::partition_point(products_.begin(), products_.end(),
                                         [&](const Product& p) { return degree_[p.out] <= d; });
    products_up_to_.push_back(static_cast<std::size_t>(it - products_.begin()));
  }

  partials_.resize(dim);
  for (int l = 0; l < dimension; ++l) {
    auto& table = partials_[static_cast<std::size_t>(l)];
    table.resize(count, Shift{npos, 0.0});
    for (std::size_t k = 0; k < count; ++k) {
      if (degree_[k] + 1 > order) continue;
      const auto e = exponent(k);
      std::copy(e.begin(), e.end(), sum.begin());
      sum[static_cast<std::size_t>(l)] += 1;
      table[k] = Shift{static_cast<std::size_t>(dense_index_[pack(sum)]),
                       static_cast<double>(sum[static_cast<std::size_t>(l)])};
    }
  }
}

const JetSpace& JetSpace::get(int dimension, int order) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<JetSpace>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{dimension, order}];
  if (!slot) slot = std::make_unique<JetSpace>(dimension, order);
  return *slot;
}

std::span<const std::uint8_t> JetSpace::exponent(std::size_t k) const {
  const auto dim = static_cast<std::size_t>(dimension_);
  return {exponents_.data() + k * dim, dim};
}

std::size_t JetSpace::pack(std::span<const std::uint8_t> e) const {
  std::size_t key = 0;
  for (std::size_t i = e.size(); i-- > 0;) key = key * static_cast<std::size_t>(order_ + 1) + e[i];
  return key;
}

std::size_t JetSpace::index(std::span<const int> exponent) const {
  if (exponent.size() != static_cast<std::size_t>(dimension_)) {
    fail(ErrorCode::InvalidArgument, "exponent length does not match jet dimension");
  }
  int total = 0;
  std::vector<std::uint8_t> e(exponent.size());
  for (std::size_t i = 0; i < exponent.size(); ++i) {
    if (exponent[i] < 0) fail(ErrorCode::InvalidArgument, "negative exponent");
    total += exponent[i];
    if (total > order_) fail(ErrorCode::OrderUnsupported, "exponent exceeds jet order");
    e[i] = static_cast<std::uint8_t>(exponent[i]);
  }
  return static_cast<std::size_t>(dense_index_[pack(e)]);
}

std::size_t JetSpace::variable_index(int variable) const {
  // Degree-one monomials are enumerated with the first variable first.
  return 1 + static_cast<std::size_t>(variable);
}

std::span<const JetSpace::Product> JetSpace::products(int max_degree) const {
  const auto d = static_cast<std::size_t>(std::clamp(max_degree, 0, order_));
  return {products_.data(), products_up_to_[d]};
}

std::span<const JetSpace::Shift> JetSpace::partial_table(int variable) const {
  return partials_[static_cast<std::size_t>(variable)];
}

// ---------------------------------------------------------------------------

Jet::Jet(const JetSpace& space, double value)
    : space_(&space), c_(space.size(), 0.0), valid_(space.order()) {
  c_[0] = value;
}

Jet Jet::variable(const JetSpace& space, int variable, double value) {
  if (variable < 0 || variable >= space.dimension()) {
    fail(ErrorCode::InvalidArgument, "jet variable index out of range");
  }
  Jet x(space, value);
  if (space.order() >= 1) x.c_[space.variable_index(variable)] = 1.0;
  return x;
}

Jet Jet::from_coefficients(const JetSpace& space, std::vector<double> coefficients, int valid) {
  if (coefficients.size() != space.size()) fail(ErrorCode::InvalidArgument, "coefficient count mismatch");
  Jet x(space, 0.0);
  x.c_ = std::move(coefficients);
  x.valid_ = std::clamp(valid, 0, space.order());
  x.truncate();
  return x;
}

double Jet::coefficient(std::span<const int> exponent) const {
  int total = 0;
  for (int e : exponent) total += e;
  if (total > valid_) fail(ErrorCode::OrderUnsupported, "requested coefficient beyond jet validity");
  return c_[space_->index(exponent)];
}

double Jet::derivative(std::span<const int> exponent) const {
  double factorial = 1.0;
  for (int e : exponent) {
    for (int k = 2; k <= e; ++k) factorial *= k;
  }
  return factorial * coefficient(exponent);
}

Jet Jet::partial(int variable) const {
  if (valid_ < 1) fail(ErrorCode::OrderUnsupported, "jet has no derivative information left");
  Jet out(*space_, 0.0);
  out.valid_ = valid_ - 1;
  const auto table = space_->partial_table(variable);
  const std::size_t limit = space_->count_up_to(out.valid_);
  for (std::size_t k = 0; k < limit; ++k) {
    const auto& s = table[k];
    out.c_[k] = s.factor * c_[s.source];
  }
  return out;
}

void Jet::truncate() {
  std::fill(c_.begin() + static_cast<std::ptrdiff_t>(space_->count_up_to(valid_)), c_.end(), 0.0);
}

Jet& Jet::operator+=(const Jet& other) {
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += other.c_[k];
  if (other.valid_ < valid_) {
    valid_ = other.valid_;
    truncate();
  }
  return *this;
}

Jet& Jet::operator-=(const Jet& other) {
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= other.c_[k];
  if (other.valid_ < valid_) {
    valid_ = other.valid_;
    truncate();
  }
  return *this;
}

Jet& Jet::operator*=(const Jet& other) {
  *this = *this * other;
  return *this;
}

Jet& Jet::operator+=(double s) {
  c_[0] += s;
  return *this;
}

Jet& Jet::operator-=(double s) {
  c_[0] -= s;
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

Jet& Jet::operator/=(double s) {
  for (double& v : c_) v /= s;
  return *this;
}

Jet Jet::operator-() const {
  Jet out = *this;
  for (double& v : out.c_) v = -v;
  return out;
}

Jet Jet::compose(std::span<const double> taylor) const {
  if (taylor.size() < static_cast<std::size_t>(valid_) + 1) {
    fail(ErrorCode::Internal, "series too short for jet composition");
  }
  Jet h = *this;
  h.c_[0] = 0.0;
  Jet r(*space_, taylor[static_cast<std::size_t>(valid_)]);
  r.valid_ = valid_;
  for (int k = valid_ - 1; k >= 0; --k) {
    r = r * h;
    r.c_[0] += taylor[static_cast<std::size_t>(k)];
  }
  return r;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }

Jet operator*(const Jet& a, const Jet& b) {
  Jet out(a.space(), 0.0);
  out.valid_ = std::min(a.valid_, b.valid_);
  out.c_[0] = 0.0;
  for (const auto& p : a.space().products(out.valid_)) {
    out.c_[p.out] += a.c_[p.lhs] * b.c_[p.rhs];
  }
  return out;
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
Jet operator+(Jet a, double s) { return a += s; }
Jet operator+(double s, Jet a) { return a += s; }
Jet operator-(Jet a, double s) { return a -= s; }
Jet operator-(double s, const Jet& a) { return (-a) += s; }
Jet operator*(Jet a, double s) { return a *= s; }
Jet operator*(double s, Jet a) { return a *= s; }
Jet operator/(Jet a, double s) { return a /= s; }
Jet operator/(double s, const Jet& a) { return reciprocal(a) *= s; }

Jet reciprocal(const Jet& x) {
  const double x0 = x.value();
  if (x0 == 0.0) fail(ErrorCode::InvalidArgument, "jet reciprocal of zero");
  double series[kMaxJetOrder + 1];
  double term = 1.0 / x0;
  for (int k = 0; k <= kMaxJetOrder; ++k) {
    series[k] = term;
    term *= -1.0 / x0;
  }
  return x.compose(series);
}

Jet exp(const Jet& x) {
  double series[kMaxJetOrder + 1];
  double term = std::exp(x.value());
  for (int k = 0; k <= kMaxJetOrder; ++k) {
    series[k] = term;
    term /= (k + 1);
  }
  return x.compose(series);
}

Jet log(const Jet& x) {
  const double x0 = x.value();
  if (!(x0 > 0.0)) fail(ErrorCode::InvalidArgument, "jet log of non-positive value");
  double series[kMaxJetOrder + 1];
  series[0] = std::log(x0);
  double power = 1.0;
  for (int k = 1; k <= kMaxJetOrder; ++k) {
    power /= x0;
    series[k] = ((k % 2 == 1) ? 1.0 : -1.0) * power / k;
  }
  return x.compose(series);
}

Jet pow(const Jet& x, double p) {
  const double x0 = x.value();
  if (!(x0 > 0.0)) fail(ErrorCode::InvalidArgument, "jet pow of non-positive value");
  double series[kMaxJetOrder + 1];
  double binom = 1.0;
  for (int k = 0; k <= kMaxJetOrder; ++k) {
    series[k] = binom * std::pow(x0, p - k);
    binom *= (p - k) / (k + 1);
  }
  return x.compose(series);
}

Jet sqrt(const Jet& x) { return pow(x, 0.5); }

Jet square(const Jet& x) { return x * x; }

// ---------------------------------------------------------------------------

JetMatrix::JetMatrix(const JetSpace& space, int n, double fill)
    : n_(n), data_(static_cast<std::size_t>(n * n), Jet(space, fill)) {}

JetMatrix JetMatrix::inverse() const {
  JetMatrix a = *this;
  JetMatrix inv(data_.front().space(), n_, 0.0);
  for (int i = 0; i < n_; ++i) inv(i, i) += 1.0;
  for (int col = 0; col < n_; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n_; ++r) {
      if (std::abs(a(r, col).value()) > std::abs(a(pivot, col).value())) pivot = r;
    }
    if (std::abs(a(pivot, col).value()) < 1e-300) {
      fail(ErrorCode::DegenerateMetric, "singular jet matrix");
    }
    if (pivot != col) {
      for (int j = 0; j < n_; ++j) {
        std::swap(a(pivot, j), a(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    }
    const Jet scale = reciprocal(a(col, col));
    for (int j = 0; j < n_; ++j) {
      a(col, j) = a(col, j) * scale;
      inv(col, j) = inv(col, j) * scale;
    }
    for (int r = 0; r < n_; ++r) {
      if (r == col) continue;
      const Jet factor = a(r, col);
      for (int j = 0; j < n_; ++j) {
        a(r, j) -= factor * a(col, j);
        inv(r, j) -= factor * inv(col, j);
      }
    }
  }
  return inv;
}

}  // namespace kverify
