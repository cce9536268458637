#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sparsemax/simplex.hpp"

namespace smax {

// Dense K x K matrix, row-major.
class JacobianMatrix {
 public:
  explicit JacobianMatrix(std::size_t dim) : dim_(dim), values_(dim * dim) {}

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t i, std::size_t j) const {
    return values_[i * dim_ + j];
  }
  double& operator()(std::size_t i, std::size_t j) {
    return values_[i * dim_ + j];
  }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }

  Vector apply(std::span<const double> v) const;

 private:
  std::size_t dim_;
  std::vector<double> values_;
};

// Counts coordinates read from v and written to the output by a JVP.
struct JvpCounter {
  std::size_t reads = 0;
  std::size_t writes = 0;
};

// Diag(p) - p p^T.
JacobianMatrix softmax_jacobian(std::span<const double> p);

// Diag(s) - s s^T / |S| for the indicator s of the support.
JacobianMatrix sparsemax_jacobian(const SupportSet& support, std::size_t dim);

// p .* (v - <p, v>).
Vector softmax_jvp(std::span<const double> p, std::span<const double> v);

// Nonzero entries of the sparsemax JVP, aligned with support.indices.
// Touches only the support coordinates of v.
Vector sparsemax_jvp_on_support(const SupportSet& support,
                                std::span<const double> v,
                                JvpCounter* counter = nullptr);

// Full-length sparsemax JVP with explicit zeros off the support.
Vector sparsemax_jvp(const SupportSet& support, std::span<const double> v,
                     JvpCounter* counter = nullptr);

}  // namespace smax
