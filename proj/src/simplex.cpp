#include "sparsemax/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "sparsemax/errors.hpp"

namespace smax {

bool SupportSet::contains(std::size_t j) const {
  return std::binary_search(indices.begin(), indices.end(), j);
}

void check_scores(std::span<const double> z) {
  if (z.empty()) throw InvalidInput("score vector is empty");
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!std::isfinite(z[i])) {
      throw InvalidInput("score vector has non-finite entry at index " +
                         std::to_string(i));
    }
  }
}

bool is_probability_vector(std::span<const double> p, double tol) {
  if (p.empty()) return false;
  double sum = 0.0;
  for (double v : p) {
    if (!std::isfinite(v) || v < 0.0) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= tol;
}

void check_probabilities(std::span<const double> p) {
  if (!is_probability_vector(p)) {
    throw InvalidInput("vector is not a point of the probability simplex");
  }
}

Vector softmax(std::span<const double> z) {
  check_scores(z);
  const double zmax = *std::max_element(z.begin(), z.end());
  Vector p(z.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    p[i] = std::exp(z[i] - zmax);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

double log_sum_exp(std::span<const double> z) {
  check_scores(z);
  const auto top = std::max_element(z.begin(), z.end());
  const double zmax = *top;
  double rest = 0.0;
  for (auto it = z.begin(); it != z.end(); ++it) {
    if (it != top) rest += std::exp(*it - zmax);
  }
  return zmax + std::log1p(rest);
}

SupportSet threshold_and_support(std::span<const double> z) {
  check_scores(z);
  const std::size_t dim = z.size();

  std::vector<std::size_t> order(dim);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return z[a] > z[b]; });

  // k(z) is the largest k satisfying the condition; the condition holds on
  // a prefix of the sorted order, so scanning the whole range and keeping
  // the last hit is exact.
  std::size_t k = 1;
  double cumsum = 0.0;
  double cumsum_at_k = z[order[0]];
  for (std::size_t r = 0; r < dim; ++r) {
    const double zr = z[order[r]];
    cumsum += zr;
    const double count = static_cast<double>(r + 1);
    if (1.0 + count * zr > cumsum) {
      k = r + 1;
      cumsum_at_k = cumsum;
    }
  }

  SupportSet s;
  s.tau = (cumsum_at_k - 1.0) / static_cast<double>(k);
  s.indices.assign(order.begin(), order.begin() + static_cast<long>(k));
  std::sort(s.indices.begin(), s.indices.end());
  return s;
}

Vector sparsemax(std::span<const double> z, const SupportSet& support) {
  Vector p(z.size(), 0.0);
  for (std::size_t j : support.indices) {
    p[j] = std::max(0.0, z[j] - support.tau);
  }
  return p;
}

Vector sparsemax(std::span<const double> z) {
  return sparsemax(z, threshold_and_support(z));
}

Vector brute_force_projection(std::span<const double> z) {
  check_scores(z);
  const std::size_t dim = z.size();
  if (dim > kMaxBruteForceDim) {
    throw CapabilityError("brute-force projection supports K <= " +
                          std::to_string(kMaxBruteForceDim) + ", got " +
                          std::to_string(dim));
  }

  // Feasible candidates have violation <= 0. Rounding can push the true
  // solution slightly positive, so keep the least-violating candidate.
  Vector best(dim, 0.0);
  double best_violation = std::numeric_limits<double>::infinity();
  Vector candidate(dim);
  const std::size_t n_masks = (std::size_t{1} << dim);
  for (std::size_t mask = 1; mask < n_masks; ++mask) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t j = 0; j < dim; ++j) {
      if (mask & (std::size_t{1} << j)) {
        sum += z[j];
        ++count;
      }
    }
    const double tau = (sum - 1.0) / static_cast<double>(count);
    double violation = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < dim; ++j) {
      if (mask & (std::size_t{1} << j)) {
        candidate[j] = z[j] - tau;
        violation = std::max(violation, -candidate[j]);
      } else {
        candidate[j] = 0.0;
        violation = std::max(violation, z[j] - tau);
      }
    }
    if (violation < best_violation) {
      best_violation = violation;
      best = candidate;
    }
  }
  return best;
}

}  // namespace smax
