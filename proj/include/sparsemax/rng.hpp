#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace smax {

// All randomness in the library flows through Rng: a std::mt19937_64 engine
// (whose output sequence is fixed by the C++ standard) with hand-written
// distributions, so streams are identical across standard libraries.
// std::*_distribution algorithms are implementation-defined and unused.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent stream for (seed, stream index), mixed through splitmix64.
  static Rng stream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1].
  double uniform_open_left() { return 1.0 - uniform(); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n), by rejection on the raw 64-bit output.
  std::size_t below(std::size_t n);

  double standard_normal();  // Box-Muller, no cached second value.
  double exponential() { return -std::log(uniform_open_left()); }

  // Knuth's multiplication method, applied in chunks of mean <= 256 so that
  // exp(-mean) never underflows.
  std::uint64_t poisson(double mean);

  // Flat Dirichlet(1, ..., 1) of the given dimension.
  std::vector<double> flat_dirichlet(std::size_t dim);

  // Index drawn with probability proportional to weights (need not sum to 1).
  std::size_t categorical(std::span<const double> weights);

  // `count` distinct indices from [0, n), uniform, in draw order.
  std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                      std::size_t count);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace smax
