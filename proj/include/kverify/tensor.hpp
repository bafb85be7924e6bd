#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace kverify {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Dense rank-k array over an n-dimensional index range, row-major (last index fastest).
class Tensor {
 public:
  Tensor() = default;
  Tensor(int n, int rank) : n_(n), rank_(rank), data_(count(n, rank), 0.0) {}

  int dim() const noexcept { return n_; }
  int rank() const noexcept { return rank_; }
  std::size_t size() const noexcept { return data_.size(); }

  template <typename... I>
  double& operator()(I... idx) {
    return data_[offset(idx...)];
  }
  template <typename... I>
  double operator()(I... idx) const {
    return data_[offset(idx...)];
  }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }
  const std::vector<double>& values() const noexcept { return data_; }

  double max_abs() const;

  // Contracts every slot with the columns of `basis`: out_{a..} = sum T_{i..} B_{ia} ...
  Tensor change_basis(const Matrix& basis) const;
  // Same contraction applied to one slot only.
  Tensor transform_slot(int slot, const Matrix& basis) const;

 private:
  static std::size_t count(int n, int rank) {
    std::size_t c = 1;
    for (int r = 0; r < rank; ++r) c *= static_cast<std::size_t>(n);
    return c;
  }

  template <typename... I>
  std::size_t offset(I... idx) const {
    std::size_t off = 0;
    ((off = off * static_cast<std::size_t>(n_) + static_cast<std::size_t>(idx)), ...);
    return off;
  }

  int n_ = 0;
  int rank_ = 0;
  std::vector<double> data_;
};

// Evaluates T(u, v, w, z) for a rank-4 tensor.
double contract4(const Tensor& t, const Vector& u, const Vector& v, const Vector& w, const Vector& z);

}  // namespace kverify
