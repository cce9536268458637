#include "sparsemax/dataset.hpp"

#include <cmath>
#include <string>

#include "sparsemax/errors.hpp"

namespace smax {

const char* to_string(Mixture m) {
  switch (m) {
    case Mixture::kUniform:
      return "uniform";
    case Mixture::kRandomDirichlet:
      return "random_dirichlet";
  }
  return "unknown";
}

Mixture mixture_from_string(const std::string& name) {
  if (name == "uniform") return Mixture::kUniform;
  if (name == "random_dirichlet" || name == "random") {
    return Mixture::kRandomDirichlet;
  }
  throw ConfigError("unknown mixture '" + name +
                    "' (expected uniform or random_dirichlet)");
}

void SyntheticConfig::validate() const {
  if (num_labels < 2) throw ConfigError("K must be >= 2");
  if (n_train == 0 || n_test == 0) throw ConfigError("counts must be > 0");
  if (!(mean_labels > 0.0) || !std::isfinite(mean_labels)) {
    throw ConfigError("mean_labels must be > 0");
  }
  if (!(mean_doc_length > 0.0) || !std::isfinite(mean_doc_length)) {
    throw ConfigError("mean_doc_length must be > 0");
  }
}

std::size_t sample_truncated_poisson(Rng& rng, double mean,
                                     std::size_t max_count) {
  // Inverse CDF over the normalized pmf on {1..max_count}, built in log
  // space. Same law as redrawing Poisson(mean) until it lands in range,
  // without the unbounded loop as mean -> 0.
  Vector weights(max_count);
  const double log_mean = std::log(mean);
  double top = -INFINITY;
  for (std::size_t n = 1; n <= max_count; ++n) {
    const double lw = static_cast<double>(n) * log_mean -
                      std::lgamma(static_cast<double>(n) + 1.0);
    weights[n - 1] = lw;
    top = std::max(top, lw);
  }
  for (double& w : weights) w = std::exp(w - top);
  return rng.categorical(weights) + 1;
}

namespace {

void fill_documents(Rng& rng, const SyntheticConfig& cfg,
                    const std::vector<Vector>& word_dists, std::size_t count,
                    LabeledDataset& out) {
  const std::size_t dim = cfg.num_labels;
  Vector q(dim);
  Vector mixture(dim);
  Vector counts(dim);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t n_active =
        sample_truncated_poisson(rng, cfg.mean_labels, dim);
    const auto active = rng.sample_without_replacement(dim, n_active);

    std::fill(q.begin(), q.end(), 0.0);
    if (cfg.mixture == Mixture::kUniform) {
      for (std::size_t k : active) q[k] = 1.0 / static_cast<double>(n_active);
    } else {
      const Vector props = rng.flat_dirichlet(n_active);
      for (std::size_t r = 0; r < n_active; ++r) q[active[r]] = props[r];
    }

    std::fill(mixture.begin(), mixture.end(), 0.0);
    for (std::size_t k : active) {
      for (std::size_t w = 0; w < dim; ++w) {
        mixture[w] += q[k] * word_dists[k][w];
      }
    }

    const std::uint64_t length = rng.poisson(cfg.mean_doc_length);
    std::fill(counts.begin(), counts.end(), 0.0);
    for (std::uint64_t t = 0; t < length; ++t) {
      counts[rng.categorical(mixture)] += 1.0;
    }
    out.add(counts, q);
  }
}

}  // namespace

DatasetSplit generate_synthetic(const SyntheticConfig& cfg) {
  cfg.validate();
  const std::size_t dim = cfg.num_labels;
  Rng rng(cfg.seed);

  std::vector<Vector> word_dists;
  word_dists.reserve(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    word_dists.push_back(rng.flat_dirichlet(dim));
  }

  DatasetSplit split{LabeledDataset(dim, dim), LabeledDataset(dim, dim)};
  fill_documents(rng, cfg, word_dists, cfg.n_train, split.train);
  fill_documents(rng, cfg, word_dists, cfg.n_test, split.test);
  return split;
}

LabeledDataset generate_separable_multilabel(std::size_t num_labels,
                                             std::size_t num_examples,
                                             std::size_t max_labels,
                                             double noise,
                                             std::uint64_t seed) {
  if (num_labels < 2) throw ConfigError("K must be >= 2");
  if (max_labels == 0 || max_labels > num_labels) {
    throw ConfigError("max_labels must be in [1, K]");
  }
  Rng rng(seed);
  LabeledDataset out(num_labels, num_labels);
  Vector x(num_labels);
  Vector q(num_labels);
  for (std::size_t i = 0; i < num_examples; ++i) {
    const std::size_t n_active = 1 + rng.below(max_labels);
    const auto active = rng.sample_without_replacement(num_labels, n_active);
    std::fill(q.begin(), q.end(), 0.0);
    for (std::size_t d = 0; d < num_labels; ++d) {
      x[d] = noise * rng.standard_normal();
    }
    for (std::size_t k : active) {
      q[k] = 1.0 / static_cast<double>(n_active);
      x[k] += 1.0;
    }
    out.add(x, q);
  }
  return out;
}

}  // namespace smax
