#include "sparsemax/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "sparsemax/errors.hpp"

namespace smax {

namespace {

void check_label(std::size_t label, std::size_t dim) {
  if (label >= dim) {
    throw InvalidInput("label " + std::to_string(label) +
                       " out of range for K=" + std::to_string(dim));
  }
}

void check_target_dim(const TargetDistribution& q, std::size_t dim) {
  if (q.dim() != dim) {
    throw InvalidInput("target has dimension " + std::to_string(q.dim()) +
                       ", scores have " + std::to_string(dim));
  }
}

// log sum_j exp(z_j) - z_max, as log1p of the non-maximal terms. Kept
// separate from z_max so small losses do not cancel against it.
struct ShiftedLse {
  double zmax;
  double excess;
};

ShiftedLse shifted_log_sum_exp(std::span<const double> z) {
  const auto top = std::max_element(z.begin(), z.end());
  double rest = 0.0;
  for (auto it = z.begin(); it != z.end(); ++it) {
    if (it != top) rest += std::exp(*it - *top);
  }
  return {*top, std::log1p(rest)};
}

}  // namespace

TargetDistribution::TargetDistribution(Vector q) : q_(std::move(q)) {
  check_probabilities(q_);
}

TargetDistribution TargetDistribution::delta(std::size_t label,
                                             std::size_t dim) {
  check_label(label, dim);
  Vector q(dim, 0.0);
  q[label] = 1.0;
  return TargetDistribution(std::move(q));
}

TargetDistribution TargetDistribution::uniform_over(
    std::span<const std::size_t> labels, std::size_t dim) {
  if (labels.empty()) throw InvalidInput("empty label set");
  Vector q(dim, 0.0);
  for (std::size_t k : labels) {
    check_label(k, dim);
    q[k] = 1.0;
  }
  double count = 0.0;
  for (double v : q) count += v;
  for (double& v : q) v /= count;
  return TargetDistribution(std::move(q));
}

LossValue logistic_loss(std::span<const double> z, std::size_t label) {
  check_scores(z);
  check_label(label, z.size());
  LossValue out;
  const ShiftedLse lse = shifted_log_sum_exp(z);
  out.value = (lse.zmax - z[label]) + lse.excess;
  out.gradient = softmax(z);
  out.gradient[label] -= 1.0;
  return out;
}

LossValue sparsemax_loss(std::span<const double> z, std::size_t label) {
  check_scores(z);
  check_label(label, z.size());
  return sparsemax_loss_multi(z, TargetDistribution::delta(label, z.size()));
}

LossValue logistic_loss_multi(std::span<const double> z,
                              const TargetDistribution& q) {
  check_scores(z);
  check_target_dim(q, z.size());
  const ShiftedLse lse = shifted_log_sum_exp(z);
  LossValue out;
  double value = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (q[j] > 0.0) {
      value += q[j] * (std::log(q[j]) + (lse.zmax - z[j]) + lse.excess);
    }
  }
  out.value = value;
  out.gradient = softmax(z);
  for (std::size_t j = 0; j < z.size(); ++j) out.gradient[j] -= q[j];
  return out;
}

LossValue sparsemax_loss_multi(std::span<const double> z,
                               const TargetDistribution& q) {
  check_scores(z);
  check_target_dim(q, z.size());
  const SupportSet support = threshold_and_support(z);
  Vector p = sparsemax(z, support);

  double value = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    const double diff = q[j] - p[j];
    value += 0.5 * diff * diff;
    if (q[j] > 0.0 && !support.contains(j)) {
      value += q[j] * (support.tau - z[j]);
    }
  }

  LossValue out;
  out.value = value;
  for (std::size_t j = 0; j < z.size(); ++j) p[j] -= q[j];
  out.gradient = std::move(p);
  return out;
}

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

LossValue binary_logistic_loss_multi(std::span<const double> z,
                                     std::span<const double> q) {
  check_scores(z);
  if (q.size() != z.size()) throw InvalidInput("target dimension mismatch");
  LossValue out;
  out.gradient.resize(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) {
    const double y = q[j] > 0.0 ? 1.0 : 0.0;
    // log(1 + exp(z)) - y z, stable for either sign of z.
    const double softplus =
        std::max(z[j], 0.0) + std::log1p(std::exp(-std::abs(z[j])));
    out.value += softplus - y * z[j];
    out.gradient[j] = sigmoid(z[j]) - y;
  }
  return out;
}

double huber_binary_reference(double t) {
  if (t >= 1.0) return 0.0;
  if (t <= -1.0) return -t;
  return (t - 1.0) * (t - 1.0) / 4.0;
}

}  // namespace smax
