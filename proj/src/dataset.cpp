#include "sparsemax/dataset.hpp"

#include <cmath>
#include <string>

#include "sparsemax/errors.hpp"

namespace smax {

LabeledDataset::LabeledDataset(std::size_t num_features,
                               std::size_t num_labels)
    : num_features_(num_features), num_labels_(num_labels) {
  if (num_labels == 0) throw InvalidInput("dataset needs at least one label");
}

LabelSet LabeledDataset::labels(std::size_t i) const {
  LabelSet out;
  const auto q = target(i);
  for (std::size_t k = 0; k < q.size(); ++k) {
    if (q[k] > 0.0) out.push_back(k);
  }
  return out;
}

void LabeledDataset::add(std::span<const double> x,
                         std::span<const double> q) {
  if (x.size() != num_features_) {
    throw InvalidInput("feature row has " + std::to_string(x.size()) +
                       " entries, expected " + std::to_string(num_features_));
  }
  if (q.size() != num_labels_) {
    throw InvalidInput("target row has " + std::to_string(q.size()) +
                       " entries, expected " + std::to_string(num_labels_));
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw InvalidInput("non-finite feature value");
  }
  check_probabilities(q);
  features_.insert(features_.end(), x.begin(), x.end());
  targets_.insert(targets_.end(), q.begin(), q.end());
  ++size_;
}

LabeledDataset LabeledDataset::subset(
    std::span<const std::size_t> rows) const {
  LabeledDataset out(num_features_, num_labels_);
  out.features_.reserve(rows.size() * num_features_);
  out.targets_.reserve(rows.size() * num_labels_);
  for (std::size_t r : rows) {
    if (r >= size_) throw InvalidInput("subset row out of range");
    const auto x = features(r);
    const auto q = target(r);
    out.features_.insert(out.features_.end(), x.begin(), x.end());
    out.targets_.insert(out.targets_.end(), q.begin(), q.end());
    ++out.size_;
  }
  return out;
}

LabeledDataset LabeledDataset::resized(std::size_t num_features,
                                       std::size_t num_labels) const {
  if (num_features < num_features_ || num_labels < num_labels_) {
    throw InvalidInput("resized() cannot shrink a dataset");
  }
  LabeledDataset out(num_features, num_labels);
  out.features_.assign(size_ * num_features, 0.0);
  out.targets_.assign(size_ * num_labels, 0.0);
  for (std::size_t i = 0; i < size_; ++i) {
    const auto x = features(i);
    const auto q = target(i);
    std::copy(x.begin(), x.end(), out.features_.begin() + i * num_features);
    std::copy(q.begin(), q.end(), out.targets_.begin() + i * num_labels);
  }
  out.size_ = size_;
  return out;
}

Standardized standardize_features(const LabeledDataset& train,
                                  const LabeledDataset& test) {
  if (train.empty()) throw EmptyDatasetError("cannot standardize: empty train");
  if (test.num_features() != train.num_features()) {
    throw InvalidInput("train/test feature dimensions differ");
  }
  const std::size_t dim = train.num_features();
  const double n = static_cast<double>(train.size());

  Vector means(dim, 0.0);
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto x = train.features(i);
    for (std::size_t d = 0; d < dim; ++d) means[d] += x[d];
  }
  for (double& m : means) m /= n;

  Vector stds(dim, 0.0);
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto x = train.features(i);
    for (std::size_t d = 0; d < dim; ++d) {
      const double c = x[d] - means[d];
      stds[d] += c * c;
    }
  }
  for (double& s : stds) s = std::sqrt(s / n);

  auto transform = [&](LabeledDataset data) {
    for (std::size_t i = 0; i < data.size(); ++i) {
      auto x = data.features(i);
      for (std::size_t d = 0; d < dim; ++d) {
        x[d] -= means[d];
        if (stds[d] >= 1e-12) x[d] /= stds[d];
      }
    }
    return data;
  };
  return {transform(train), transform(test), std::move(means),
          std::move(stds)};
}

}  // namespace smax
