#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sparsemax/dataset.hpp"
#include "sparsemax/simplex.hpp"

namespace smax {

enum class LossKind {
  kLogistic,        // multinomial, KL(q || softmax(z))
  kSparsemax,       // sparsemax loss against q
  kBinaryLogistic,  // one independent logistic regressor per label
};

const char* to_string(LossKind kind);
LossKind loss_kind_from_string(const std::string& name);

// z = W x + b with W stored row-major (K x D).
struct LinearModel {
  std::size_t num_labels = 0;
  std::size_t num_features = 0;
  std::vector<double> weights;
  Vector bias;
  LossKind loss = LossKind::kSparsemax;

  LinearModel() = default;
  LinearModel(std::size_t num_labels, std::size_t num_features, LossKind loss);

  double weight(std::size_t k, std::size_t d) const {
    return weights[k * num_features + d];
  }
  double frobenius_sq() const;

  bool operator==(const LinearModel&) const = default;
};

struct TrainConfig {
  double lambda = 0.0;
  std::size_t max_epochs = 100;
  double learning_rate = 1.0;  // first trial step
  std::uint64_t seed = 0;
  double convergence_tol = 1e-9;  // relative objective change
  // 0 starts from W = 0, b = 0; otherwise parameters start at
  // init_scale * N(0, 1) drawn from `seed`.
  double init_scale = 0.0;

  void validate() const;  // throws ConfigError
};

struct TrainTrace {
  std::vector<double> objective;  // initial value, then one per accepted step
  std::size_t epochs = 0;
  bool converged = false;
};

struct Objective {
  double value = 0.0;
  std::vector<double> grad_weights;  // K x D row-major
  Vector grad_bias;
};

// lambda/2 ||W||_F^2 + (1/N) sum_i L(W x_i + b; q_i). Bias unregularized.
Objective evaluate_objective(const LinearModel& model,
                             const LabeledDataset& data, double lambda);

// Per-example loss for the model's loss kind.
double example_loss(LossKind kind, std::span<const double> z,
                    std::span<const double> q);

// Full-batch gradient descent with backtracking: the trial step is halved
// (at most 30 times) until the objective strictly decreases, and doubled
// after each accepted step. Stops after max_epochs accepted steps, when the
// relative decrease drops below convergence_tol, or when no halving helps.
LinearModel fit(const LabeledDataset& data, const TrainConfig& cfg,
                LossKind loss, TrainTrace* trace = nullptr);

Vector predict_scores(const LinearModel& model, std::span<const double> x);

// softmax(z) for logistic models, sparsemax(z) for sparsemax models.
Vector predict_distribution(const LinearModel& model,
                            std::span<const double> x);

struct DecisionRule {
  enum class Kind {
    kLogisticThreshold,  // {k : sigmoid(z_k) > delta}, delta in [0, 1]
    kSoftmaxThreshold,   // {k : softmax_k(z) > p0}, p0 in [0, 1]
    kSparsemaxScale,     // {k : sparsemax_k(t z) != 0}, t > 0
  };
  Kind kind = Kind::kSparsemaxScale;
  double param = 1.0;

  void validate() const;  // throws InvalidInput
};

// Label set chosen by the rule for scores z; may be empty.
LabelSet apply_rule(std::span<const double> z, const DecisionRule& rule);

LabelSet predict_labels(const LinearModel& model, std::span<const double> x,
                        const DecisionRule& rule);

// Validation score for a trained fold model (higher is better).
using ValidationMetric = std::function<double(
    const LinearModel& model, const LabeledDataset& validation,
    double rule_param)>;

struct CvCell {
  double lambda = 0.0;
  double rule_param = 0.0;
  double mean_score = 0.0;
};

struct CvResult {
  double best_lambda = 0.0;
  double best_rule_param = 0.0;
  double best_score = 0.0;
  std::vector<CvCell> cells;  // lambda-major, both axes ascending
};

// k-fold cross-validation over lambdas x rule_params. One model is trained
// per (lambda, fold); every rule parameter is scored on it. Folds come from
// a shuffle seeded by `fold_seed`. Ties go to the smaller lambda, then the
// smaller rule parameter.
CvResult cross_validate(const LabeledDataset& data,
                        std::vector<double> lambdas,
                        std::vector<double> rule_params, std::size_t folds,
                        const ValidationMetric& metric, TrainConfig base_cfg,
                        LossKind loss, std::uint64_t fold_seed);

}  // namespace smax
