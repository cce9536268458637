#pragma once

#include <cstddef>
#include <span>

#include "sparsemax/simplex.hpp"

namespace smax {

struct LossValue {
  double value = 0.0;
  Vector gradient;
};

// Target distribution over K labels. Holds a validated simplex point.
class TargetDistribution {
 public:
  // Throws InvalidInput unless q is a probability vector.
  explicit TargetDistribution(Vector q);

  static TargetDistribution delta(std::size_t label, std::size_t dim);
  // Uniform over the given labels; throws on an empty or out-of-range set.
  static TargetDistribution uniform_over(std::span<const std::size_t> labels,
                                         std::size_t dim);

  std::span<const double> values() const noexcept { return q_; }
  std::size_t dim() const noexcept { return q_.size(); }
  double operator[](std::size_t i) const { return q_[i]; }

 private:
  Vector q_;
};

// -z_k + log sum_j exp(z_j); gradient softmax(z) - delta_k.
LossValue logistic_loss(std::span<const double> z, std::size_t label);

// -z_k + 1/2 sum_{j in S} (z_j^2 - tau^2) + 1/2; gradient sparsemax(z) - delta_k.
LossValue sparsemax_loss(std::span<const double> z, std::size_t label);

// KL(q || softmax(z)) with 0 log 0 = 0; gradient softmax(z) - q.
LossValue logistic_loss_multi(std::span<const double> z,
                              const TargetDistribution& q);

// -<q,z> + 1/2 sum_{j in S} (z_j^2 - tau^2) + 1/2 ||q||^2;
// gradient sparsemax(z) - q.
//
// The value is evaluated in the algebraically equal form
//   1/2 ||q - p||^2 + sum_{j not in S} q_j (tau - z_j),  p = sparsemax(z),
// which is a sum of nonnegative terms and so never rounds below zero.
LossValue sparsemax_loss_multi(std::span<const double> z,
                               const TargetDistribution& q);

// Sum over labels of independent binary logistic losses with targets
// y_k = [q_k > 0]; gradient sigmoid(z_k) - y_k.
LossValue binary_logistic_loss_multi(std::span<const double> z,
                                     std::span<const double> q);

// Modified Huber loss of the margin t.
double huber_binary_reference(double t);

double sigmoid(double t);

}  // namespace smax
