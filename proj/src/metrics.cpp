#include "sparsemax/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sparsemax/errors.hpp"

namespace smax {

namespace {

void check_same_dim(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InvalidInput("dimension mismatch: " + std::to_string(a.size()) +
                       " vs " + std::to_string(b.size()));
  }
}

// a * log(a / m) with 0 log 0 = 0; m > 0 whenever a > 0.
double kl_term(double a, double m) { return a > 0.0 ? a * std::log(a / m) : 0.0; }

double f1(std::size_t tp, std::size_t fp, std::size_t fn) {
  const std::size_t denom = 2 * tp + fp + fn;
  return denom == 0 ? 0.0
                    : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

}  // namespace

double squared_error(std::span<const double> q, std::span<const double> p) {
  check_same_dim(q, p);
  double acc = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double d = q[i] - p[i];
    acc += d * d;
  }
  return acc;
}

double js_divergence(std::span<const double> q, std::span<const double> p) {
  check_same_dim(q, p);
  double kl_q = 0.0;
  double kl_p = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double m = 0.5 * (q[i] + p[i]);
    kl_q += kl_term(q[i], m);
    kl_p += kl_term(p[i], m);
  }
  return 0.5 * (kl_q + kl_p);
}

F1Scores micro_macro_f1(std::span<const LabelSet> predicted,
                        std::span<const LabelSet> gold,
                        std::size_t num_labels) {
  if (predicted.size() != gold.size()) {
    throw InvalidInput("predicted and gold label lists differ in length");
  }
  std::vector<std::size_t> tp(num_labels, 0), fp(num_labels, 0),
      fn(num_labels, 0);
  std::vector<char> in_gold(num_labels);
  for (std::size_t i = 0; i < gold.size(); ++i) {
    std::fill(in_gold.begin(), in_gold.end(), 0);
    for (std::size_t k : gold[i]) {
      if (k >= num_labels) throw InvalidInput("gold label out of range");
      in_gold[k] = 1;
    }
    std::vector<char> in_pred(num_labels, 0);
    for (std::size_t k : predicted[i]) {
      if (k >= num_labels) throw InvalidInput("predicted label out of range");
      in_pred[k] = 1;
    }
    for (std::size_t k = 0; k < num_labels; ++k) {
      if (in_pred[k] && in_gold[k]) ++tp[k];
      else if (in_pred[k]) ++fp[k];
      else if (in_gold[k]) ++fn[k];
    }
  }

  std::size_t tp_all = 0, fp_all = 0, fn_all = 0;
  double macro = 0.0;
  for (std::size_t k = 0; k < num_labels; ++k) {
    tp_all += tp[k];
    fp_all += fp[k];
    fn_all += fn[k];
    macro += f1(tp[k], fp[k], fn[k]);
  }
  F1Scores out;
  out.micro = f1(tp_all, fp_all, fn_all);
  out.macro = num_labels == 0 ? 0.0 : macro / static_cast<double>(num_labels);
  return out;
}

MetricReport distribution_report(const LabeledDataset& data,
                                 std::span<const Vector> predicted) {
  if (predicted.size() != data.size()) {
    throw InvalidInput("one prediction per example required");
  }
  MetricReport report;
  report.n_examples = data.size();
  if (data.empty()) return report;
  for (std::size_t i = 0; i < data.size(); ++i) {
    report.mse += squared_error(data.target(i), predicted[i]);
    report.js_divergence += js_divergence(data.target(i), predicted[i]);
  }
  const double n = static_cast<double>(data.size());
  report.mse /= n;
  report.js_divergence /= n;
  return report;
}

}  // namespace smax
