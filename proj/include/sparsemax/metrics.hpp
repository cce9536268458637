#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sparsemax/dataset.hpp"
#include "sparsemax/simplex.hpp"

namespace smax {

// ||q - p||^2.
double squared_error(std::span<const double> q, std::span<const double> p);

// 1/2 KL(q || m) + 1/2 KL(p || m), m = (p + q) / 2, natural log,
// 0 log 0 = 0. Bounded by ln 2.
double js_divergence(std::span<const double> q, std::span<const double> p);

struct F1Scores {
  double micro = 0.0;
  double macro = 0.0;
};

// Micro-F1 from TP/FP/FN pooled over labels; macro-F1 the unweighted mean
// of per-label F1 over all K labels. F1 with a zero denominator is 0.
F1Scores micro_macro_f1(std::span<const LabelSet> predicted,
                        std::span<const LabelSet> gold, std::size_t num_labels);

struct MetricReport {
  double mse = 0.0;
  double js_divergence = 0.0;
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
  std::size_t n_examples = 0;
};

// Dataset-level MSE and JS: means of the per-example values over rows.
// `predicted` holds one distribution per target row, row-major.
MetricReport distribution_report(const LabeledDataset& data,
                                 std::span<const Vector> predicted);

}  // namespace smax
