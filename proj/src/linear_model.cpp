#include "sparsemax/linear_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sparsemax/errors.hpp"
#include "sparsemax/loss.hpp"
#include "sparsemax/rng.hpp"

namespace smax {

namespace {

constexpr int kMaxHalvings = 30;

LossValue loss_and_gradient(LossKind kind, std::span<const double> z,
                            std::span<const double> q) {
  switch (kind) {
    case LossKind::kLogistic:
      return logistic_loss_multi(z, TargetDistribution(Vector(q.begin(), q.end())));
    case LossKind::kSparsemax:
      return sparsemax_loss_multi(z, TargetDistribution(Vector(q.begin(), q.end())));
    case LossKind::kBinaryLogistic:
      return binary_logistic_loss_multi(z, q);
  }
  throw InvalidInput("unknown loss kind");
}

void check_compatible(const LinearModel& model, const LabeledDataset& data) {
  if (model.num_features != data.num_features() ||
      model.num_labels != data.num_labels()) {
    throw InvalidInput("model is " + std::to_string(model.num_labels) + "x" +
                       std::to_string(model.num_features) + ", data is " +
                       std::to_string(data.num_labels()) + "x" +
                       std::to_string(data.num_features()));
  }
}

}  // namespace

const char* to_string(LossKind kind) {
  switch (kind) {
    case LossKind::kLogistic:
      return "logistic";
    case LossKind::kSparsemax:
      return "sparsemax";
    case LossKind::kBinaryLogistic:
      return "independent_binary_logistic";
  }
  return "unknown";
}

LossKind loss_kind_from_string(const std::string& name) {
  if (name == "logistic" || name == "softmax") return LossKind::kLogistic;
  if (name == "sparsemax") return LossKind::kSparsemax;
  if (name == "independent_binary_logistic" || name == "binary_logistic") {
    return LossKind::kBinaryLogistic;
  }
  throw ConfigError("unknown loss kind '" + name + "'");
}

LinearModel::LinearModel(std::size_t labels, std::size_t features,
                         LossKind kind)
    : num_labels(labels),
      num_features(features),
      weights(labels * features, 0.0),
      bias(labels, 0.0),
      loss(kind) {}

double LinearModel::frobenius_sq() const {
  return std::inner_product(weights.begin(), weights.end(), weights.begin(),
                            0.0);
}

void TrainConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("lambda must be finite and >= 0");
  }
  if (max_epochs == 0) throw ConfigError("max_epochs must be positive");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  if (!(convergence_tol > 0.0)) {
    throw ConfigError("convergence_tol must be > 0");
  }
  if (!(init_scale >= 0.0)) throw ConfigError("init_scale must be >= 0");
}

double example_loss(LossKind kind, std::span<const double> z,
                    std::span<const double> q) {
  return loss_and_gradient(kind, z, q).value;
}

Vector predict_scores(const LinearModel& model, std::span<const double> x) {
  if (x.size() != model.num_features) {
    throw InvalidInput("input has " + std::to_string(x.size()) +
                       " features, model expects " +
                       std::to_string(model.num_features));
  }
  Vector z(model.bias);
  for (std::size_t k = 0; k < model.num_labels; ++k) {
    const double* row = model.weights.data() + k * model.num_features;
    double acc = 0.0;
    for (std::size_t d = 0; d < model.num_features; ++d) acc += row[d] * x[d];
    z[k] += acc;
  }
  return z;
}

Vector predict_distribution(const LinearModel& model,
                            std::span<const double> x) {
  const Vector z = predict_scores(model, x);
  switch (model.loss) {
    case LossKind::kLogistic:
      return softmax(z);
    case LossKind::kSparsemax:
      return sparsemax(z);
    case LossKind::kBinaryLogistic:
      break;
  }
  throw InvalidInput(
      "independent binary logistic models do not define a distribution");
}

Objective evaluate_objective(const LinearModel& model,
                             const LabeledDataset& data, double lambda) {
  check_compatible(model, data);
  if (data.empty()) throw TrainingError("empty training data");
  const std::size_t dim_k = model.num_labels;
  const std::size_t dim_d = model.num_features;
  const double inv_n = 1.0 / static_cast<double>(data.size());

  Objective obj;
  obj.grad_weights.assign(dim_k * dim_d, 0.0);
  obj.grad_bias.assign(dim_k, 0.0);
  double loss_sum = 0.0;
  // Fixed-order accumulation keeps the result bitwise reproducible.
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto x = data.features(i);
    const LossValue lv =
        loss_and_gradient(model.loss, predict_scores(model, x), data.target(i));
    loss_sum += lv.value;
    for (std::size_t k = 0; k < dim_k; ++k) {
      const double g = lv.gradient[k];
      if (g == 0.0) continue;
      obj.grad_bias[k] += g;
      double* row = obj.grad_weights.data() + k * dim_d;
      for (std::size_t d = 0; d < dim_d; ++d) row[d] += g * x[d];
    }
  }

  obj.value = 0.5 * lambda * model.frobenius_sq() + inv_n * loss_sum;
  for (std::size_t j = 0; j < obj.grad_weights.size(); ++j) {
    obj.grad_weights[j] = inv_n * obj.grad_weights[j] + lambda * model.weights[j];
  }
  for (double& g : obj.grad_bias) g *= inv_n;
  return obj;
}

LinearModel fit(const LabeledDataset& data, const TrainConfig& cfg,
                LossKind loss, TrainTrace* trace) {
  cfg.validate();
  if (data.empty()) throw TrainingError("empty training data");

  LinearModel model(data.num_labels(), data.num_features(), loss);
  if (cfg.init_scale > 0.0) {
    Rng rng(cfg.seed);
    for (double& w : model.weights) w = cfg.init_scale * rng.standard_normal();
    for (double& b : model.bias) b = cfg.init_scale * rng.standard_normal();
  }

  Objective current = evaluate_objective(model, data, cfg.lambda);
  if (!std::isfinite(current.value)) {
    throw TrainingError("objective is not finite at the initial point");
  }
  TrainTrace local;
  local.objective.push_back(current.value);

  double step = cfg.learning_rate;
  LinearModel trial = model;
  while (local.epochs < cfg.max_epochs) {
    bool accepted = false;
    Objective next;
    for (int h = 0; h <= kMaxHalvings; ++h) {
      for (std::size_t j = 0; j < model.weights.size(); ++j) {
        trial.weights[j] = model.weights[j] - step * current.grad_weights[j];
      }
      for (std::size_t k = 0; k < model.bias.size(); ++k) {
        trial.bias[k] = model.bias[k] - step * current.grad_bias[k];
      }
      bool finite = true;
      for (double w : trial.weights) finite = finite && std::isfinite(w);
      for (double b : trial.bias) finite = finite && std::isfinite(b);
      if (finite) {
        next = evaluate_objective(trial, data, cfg.lambda);
        if (next.value < current.value) {
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) {
      local.converged = true;
      break;
    }

    const double decrease = current.value - next.value;
    const double scale = std::max(std::abs(current.value), 1e-300);
    std::swap(model, trial);
    current = std::move(next);
    ++local.epochs;
    local.objective.push_back(current.value);
    if (decrease / scale < cfg.convergence_tol) {
      local.converged = true;
      break;
    }
    step *= 2.0;
  }

  if (!std::isfinite(current.value)) {
    throw TrainingError("objective became non-finite");
  }
  if (trace != nullptr) *trace = std::move(local);
  return model;
}

void DecisionRule::validate() const {
  if (!std::isfinite(param)) throw InvalidInput("rule parameter not finite");
  switch (kind) {
    case Kind::kLogisticThreshold:
    case Kind::kSoftmaxThreshold:
      if (param < 0.0 || param > 1.0) {
        throw InvalidInput("probability threshold must lie in [0, 1]");
      }
      break;
    case Kind::kSparsemaxScale:
      if (!(param > 0.0)) throw InvalidInput("score scale must be > 0");
      break;
  }
}

LabelSet apply_rule(std::span<const double> z, const DecisionRule& rule) {
  rule.validate();
  check_scores(z);
  LabelSet out;
  switch (rule.kind) {
    case DecisionRule::Kind::kLogisticThreshold:
      for (std::size_t k = 0; k < z.size(); ++k) {
        if (sigmoid(z[k]) > rule.param) out.push_back(k);
      }
      break;
    case DecisionRule::Kind::kSoftmaxThreshold: {
      const Vector p = softmax(z);
      for (std::size_t k = 0; k < z.size(); ++k) {
        if (p[k] > rule.param) out.push_back(k);
      }
      break;
    }
    case DecisionRule::Kind::kSparsemaxScale: {
      Vector scaled(z.begin(), z.end());
      for (double& v : scaled) v *= rule.param;
      const Vector p = sparsemax(scaled);
      for (std::size_t k = 0; k < z.size(); ++k) {
        if (p[k] != 0.0) out.push_back(k);
      }
      break;
    }
  }
  return out;
}

LabelSet predict_labels(const LinearModel& model, std::span<const double> x,
                        const DecisionRule& rule) {
  return apply_rule(predict_scores(model, x), rule);
}

CvResult cross_validate(const LabeledDataset& data,
                        std::vector<double> lambdas,
                        std::vector<double> rule_params, std::size_t folds,
                        const ValidationMetric& metric, TrainConfig base_cfg,
                        LossKind loss, std::uint64_t fold_seed) {
  if (folds < 2) throw ConfigError("cross-validation needs >= 2 folds");
  if (data.size() < folds) {
    throw ConfigError("cannot split " + std::to_string(data.size()) +
                      " examples into " + std::to_string(folds) + " folds");
  }
  if (lambdas.empty() || rule_params.empty()) {
    throw ConfigError("hyperparameter grid is empty");
  }
  std::sort(lambdas.begin(), lambdas.end());
  std::sort(rule_params.begin(), rule_params.end());

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(fold_seed);
  rng.shuffle(order);
  std::vector<std::vector<std::size_t>> held_out(folds), kept(folds);
  for (std::size_t r = 0; r < order.size(); ++r) {
    for (std::size_t f = 0; f < folds; ++f) {
      (r % folds == f ? held_out[f] : kept[f]).push_back(order[r]);
    }
  }
  for (std::size_t f = 0; f < folds; ++f) {
    std::sort(held_out[f].begin(), held_out[f].end());
    std::sort(kept[f].begin(), kept[f].end());
    if (held_out[f].empty() || kept[f].empty()) {
      throw ConfigError("degenerate fold " + std::to_string(f));
    }
  }

  CvResult result;
  bool have_best = false;
  for (double lambda : lambdas) {
    std::vector<double> sums(rule_params.size(), 0.0);
    TrainConfig cfg = base_cfg;
    cfg.lambda = lambda;
    for (std::size_t f = 0; f < folds; ++f) {
      const LabeledDataset train = data.subset(kept[f]);
      const LabeledDataset valid = data.subset(held_out[f]);
      const LinearModel model = fit(train, cfg, loss);
      for (std::size_t r = 0; r < rule_params.size(); ++r) {
        sums[r] += metric(model, valid, rule_params[r]);
      }
    }
    for (std::size_t r = 0; r < rule_params.size(); ++r) {
      const double mean = sums[r] / static_cast<double>(folds);
      result.cells.push_back({lambda, rule_params[r], mean});
      if (!have_best || mean > result.best_score) {
        have_best = true;
        result.best_score = mean;
        result.best_lambda = lambda;
        result.best_rule_param = rule_params[r];
      }
    }
  }
  return result;
}

}  // namespace smax
