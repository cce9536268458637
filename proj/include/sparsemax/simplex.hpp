#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace smax {

using Vector = std::vector<double>;

// Absolute tolerance on sum(p) == 1 for probability vectors.
inline constexpr double kSimplexTolerance = 1e-9;

// Largest dimension accepted by brute_force_projection (2^K - 1 supports).
inline constexpr std::size_t kMaxBruteForceDim = 20;

// Coordinates surviving the simplex projection and the threshold that
// produced them. `indices` is ascending; every z[j] > tau for j in indices.
struct SupportSet {
  std::vector<std::size_t> indices;
  double tau = 0.0;

  std::size_t size() const noexcept { return indices.size(); }
  bool contains(std::size_t j) const;
};

// Throws InvalidInput if z is empty or has a NaN/Inf entry.
void check_scores(std::span<const double> z);

// Throws InvalidInput unless p is nonnegative and sums to 1 within
// kSimplexTolerance.
void check_probabilities(std::span<const double> p);

bool is_probability_vector(std::span<const double> p,
                           double tol = kSimplexTolerance);

Vector softmax(std::span<const double> z);

// log(sum_j exp(z_j)), evaluated as max + log1p(sum of the rest).
double log_sum_exp(std::span<const double> z);

// Sort-based evaluation of the threshold tau(z) and its support.
// Ties among equal scores keep their original index order, and the
// support size is the largest k with 1 + k*z_(k) > sum_{j<=k} z_(j)
// under a strict double-precision comparison.
SupportSet threshold_and_support(std::span<const double> z);

// Euclidean projection of z onto the probability simplex. Off-support
// coordinates are exactly 0.0.
Vector sparsemax(std::span<const double> z);

// Same projection given a support already computed for z.
Vector sparsemax(std::span<const double> z, const SupportSet& support);

// Enumerates every nonempty candidate support and returns the one meeting
// the KKT conditions. Exponential in K; K <= kMaxBruteForceDim.
Vector brute_force_projection(std::span<const double> z);

}  // namespace smax
