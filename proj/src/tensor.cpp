#include "kverify/tensor.hpp"

#include <cmath>

namespace kverify {

double Tensor::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

Tensor Tensor::change_basis(const Matrix& basis) const {
  Tensor current = *this;
  for (int slot = 0; slot < rank_; ++slot) current = current.transform_slot(slot, basis);
  return current;
}

Tensor Tensor::transform_slot(int slot, const Matrix& basis) const {
  const auto n = static_cast<std::size_t>(n_);
  // View the array as [outer][slot][inner].
  std::size_t inner = 1;
  for (int r = slot + 1; r < rank_; ++r) inner *= n;
  const std::size_t outer = size() / (n * inner);
  Tensor next(n_, rank_);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t a = 0; a < n; ++a) {
      double* dst = next.data_.data() + (o * n + a) * inner;
      for (std::size_t i = 0; i < n; ++i) {
        const double b = basis(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a));
        if (b == 0.0) continue;
        const double* src = data_.data() + (o * n + i) * inner;
        for (std::size_t k = 0; k < inner; ++k) dst[k] += b * src[k];
      }
    }
  }
  return next;
}

double contract4(const Tensor& t, const Vector& u, const Vector& v, const Vector& w, const Vector& z) {
  const int n = t.dim();
  double total = 0.0;
  for (int a = 0; a < n; ++a) {
    if (u[a] == 0.0) continue;
    for (int b = 0; b < n; ++b) {
      if (v[b] == 0.0) continue;
      const double ab = u[a] * v[b];
      for (int c = 0; c < n; ++c) {
        if (w[c] == 0.0) continue;
        double row = 0.0;
        for (int d = 0; d < n; ++d) row += t(a, b, c, d) * z[d];
        total += ab * w[c] * row;
      }
    }
  }
  return total;
}

}  // namespace kverify
