#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sparsemax/rng.hpp"
#include "sparsemax/simplex.hpp"

namespace smax {

using LabelSet = std::vector<std::size_t>;

// Dense features plus one target distribution per example, both row-major.
class LabeledDataset {
 public:
  LabeledDataset(std::size_t num_features, std::size_t num_labels);

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  std::size_t num_features() const noexcept { return num_features_; }
  std::size_t num_labels() const noexcept { return num_labels_; }

  std::span<const double> features(std::size_t i) const {
    return {features_.data() + i * num_features_, num_features_};
  }
  std::span<double> features(std::size_t i) {
    return {features_.data() + i * num_features_, num_features_};
  }
  std::span<const double> target(std::size_t i) const {
    return {targets_.data() + i * num_labels_, num_labels_};
  }
  // Labels with positive target mass, ascending.
  LabelSet labels(std::size_t i) const;

  // Appends an example; throws InvalidInput on a dimension mismatch, a
  // non-finite feature, or a target that is not a probability vector.
  void add(std::span<const double> x, std::span<const double> q);

  LabeledDataset subset(std::span<const std::size_t> rows) const;

  // Copy with zero-padded feature and label dimensions; dims may only grow.
  LabeledDataset resized(std::size_t num_features,
                         std::size_t num_labels) const;

  bool operator==(const LabeledDataset&) const = default;

 private:
  std::size_t num_features_;
  std::size_t num_labels_;
  std::size_t size_ = 0;
  std::vector<double> features_;
  std::vector<double> targets_;
};

// ---------------------------------------------------------------------------
// Synthetic label-proportion documents.

enum class Mixture { kUniform, kRandomDirichlet };

const char* to_string(Mixture m);
Mixture mixture_from_string(const std::string& name);

struct SyntheticConfig {
  std::size_t num_labels = 10;  // also the vocabulary size
  std::size_t n_train = 300;
  std::size_t n_test = 300;
  double mean_labels = 2.0;
  double mean_doc_length = 200.0;
  Mixture mixture = Mixture::kUniform;
  std::uint64_t seed = 1;

  void validate() const;  // throws ConfigError
};

struct DatasetSplit {
  LabeledDataset train;
  LabeledDataset test;
};

// Each example is a bag of words: pick N in {1..K} from a Poisson truncated
// to that range, N distinct labels uniformly, label proportions (uniform or
// flat Dirichlet), a Poisson document length, then that many words from the
// mixture of the chosen labels' word distributions. Features are raw word
// counts. Word distributions are drawn once per call from a flat Dirichlet.
DatasetSplit generate_synthetic(const SyntheticConfig& cfg);

// Draws N from Poisson(mean) conditioned on 1 <= N <= max_count.
std::size_t sample_truncated_poisson(Rng& rng, double mean,
                                     std::size_t max_count);

// Multi-label data separable by a linear model: features are label
// indicators (D = K) plus N(0, noise^2) jitter, 1..max_labels labels per
// example, targets uniform over the labels.
LabeledDataset generate_separable_multilabel(std::size_t num_labels,
                                             std::size_t num_examples,
                                             std::size_t max_labels,
                                             double noise, std::uint64_t seed);

// ---------------------------------------------------------------------------
// LIBSVM multi-label text format: `l1,l2,... f1:v1 f2:v2 ...` per line,
// feature indices 1-based in the file.

struct LibsvmOptions {
  std::size_t label_base = 1;  // index in the file of the first label
  std::optional<std::size_t> num_labels;
  std::optional<std::size_t> num_features;
};

struct LibsvmReadResult {
  LabeledDataset data;
  std::size_t dropped_unlabeled = 0;
};

// Targets are uniform over each line's labels; lines without labels are
// dropped and counted. Throws ParseError on malformed lines and
// EmptyDatasetError if nothing remains.
LibsvmReadResult read_libsvm_multilabel(std::istream& in,
                                        const LibsvmOptions& opts = {});
LibsvmReadResult read_libsvm_multilabel(const std::filesystem::path& path,
                                        const LibsvmOptions& opts = {});

// Writes labels with positive target mass and nonzero features.
void write_libsvm_multilabel(std::ostream& out, const LabeledDataset& data,
                             std::size_t label_base = 1);
void write_libsvm_multilabel(const std::filesystem::path& path,
                             const LabeledDataset& data,
                             std::size_t label_base = 1);

// ---------------------------------------------------------------------------

struct Standardized {
  LabeledDataset train;
  LabeledDataset test;
  Vector means;
  Vector stds;
};

// Zero mean / unit variance per feature using train statistics only
// (population variance). Features with std < 1e-12 are centered only.
Standardized standardize_features(const LabeledDataset& train,
                                  const LabeledDataset& test);

}  // namespace smax
