#include "sparsemax/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <istream>
#include <ostream>
#include <set>
#include <string_view>
#include <thread>

#include "sparsemax/errors.hpp"
#include "sparsemax/format.hpp"
#include "sparsemax/metrics.hpp"
#include "sparsemax/rng.hpp"
#include "sparsemax/simplex.hpp"

namespace smax {

using nlohmann::json;

std::uint64_t default_seed() {
  if (const char* env = std::getenv(kSeedEnvVar)) {
    std::uint64_t seed = 0;
    const std::string_view text(env);
    const auto [ptr, ec] =
        std::from_chars(text.data(), text.data() + text.size(), seed);
    if (ec == std::errc() && ptr == text.data() + text.size()) return seed;
  }
  return 1;
}

std::string dump_result(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// transform

TableFormat table_format_from_string(const std::string& name) {
  if (name == "json") return TableFormat::kJson;
  if (name == "csv") return TableFormat::kCsv;
  throw ConfigError("unknown format '" + name + "' (expected json or csv)");
}

namespace {

std::string join(std::span<const double> v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ';';
    out += format_double(v[i]);
  }
  return out;
}

std::string join(std::span<const std::size_t> v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ';';
    out += std::to_string(v[i]);
  }
  return out;
}

Vector parse_score_row(std::string_view line, std::size_t line_no) {
  Vector z;
  std::size_t pos = 0;
  auto is_sep = [](char c) {
    return c == ' ' || c == '\t' || c == ',' || c == '\r';
  };
  while (pos < line.size()) {
    while (pos < line.size() && is_sep(line[pos])) ++pos;
    std::size_t end = pos;
    while (end < line.size() && !is_sep(line[end])) ++end;
    if (end == pos) break;
    std::string_view tok = line.substr(pos, end - pos);
    if (tok.front() == '+') tok.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() ||
        !std::isfinite(v)) {
      throw ParseError(line_no, "not a finite number: '" +
                                    std::string(line.substr(pos, end - pos)) +
                                    "'");
    }
    z.push_back(v);
    pos = end;
  }
  return z;
}

}  // namespace

std::size_t run_transform(std::istream& in, std::ostream& out,
                          TableFormat format) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const Vector z = parse_score_row(line, line_no);
    const SupportSet support = threshold_and_support(z);
    const Vector soft = softmax(z);
    const Vector sparse = sparsemax(z, support);
    if (format == TableFormat::kJson) {
      json rec = {{"softmax", soft},
                  {"sparsemax", sparse},
                  {"support", support.indices},
                  {"tau", support.tau}};
      out << rec.dump() << '\n';
    } else {
      if (rows == 0) out << "softmax,sparsemax,support,tau\n";
      out << join(soft) << ',' << join(sparse) << ',' << join(support.indices)
          << ',' << format_double(support.tau) << '\n';
    }
    ++rows;
  }
  return rows;
}

// ---------------------------------------------------------------------------
// labelprop

namespace {

std::vector<double> powers_of_ten(int lo, int hi) {
  std::vector<double> out;
  for (int j = lo; j <= hi; ++j) out.push_back(std::pow(10.0, j));
  return out;
}

TrainConfig train_from_json(const json& j, TrainConfig base) {
  static const std::set<std::string> known = {
      "max_epochs", "learning_rate", "convergence_tol", "init_scale"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ConfigError("unknown train key '" + key + "'");
  }
  base.max_epochs = j.value("max_epochs", base.max_epochs);
  base.learning_rate = j.value("learning_rate", base.learning_rate);
  base.convergence_tol = j.value("convergence_tol", base.convergence_tol);
  base.init_scale = j.value("init_scale", base.init_scale);
  return base;
}

json train_to_json(const TrainConfig& t) {
  return {{"max_epochs", t.max_epochs},
          {"learning_rate", t.learning_rate},
          {"convergence_tol", t.convergence_tol},
          {"init_scale", t.init_scale}};
}

// Runs task(i) for i in [0, n) on up to `threads` workers.
template <typename Task>
void parallel_for(std::size_t n, std::size_t threads, Task task) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          task(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

LabelPropConfig::LabelPropConfig() {
  lambdas = powers_of_ten(-9, 0);
  train.max_epochs = 1000;
  train.convergence_tol = 1e-9;
}

void LabelPropConfig::validate() const {
  SyntheticConfig probe;
  probe.num_labels = num_labels;
  probe.n_train = n_train;
  probe.n_test = n_test;
  probe.mean_labels = mean_labels;
  for (double len : doc_lengths) {
    probe.mean_doc_length = len;
    probe.validate();
  }
  if (doc_lengths.empty() || mixtures.empty() || losses.empty()) {
    throw ConfigError("doc_lengths, mixtures, and losses must be nonempty");
  }
  for (LossKind l : losses) {
    if (l == LossKind::kBinaryLogistic) {
      throw ConfigError("labelprop needs a loss that predicts a distribution");
    }
  }
  if (lambdas.empty()) throw ConfigError("lambda grid is empty");
  for (double l : lambdas) {
    if (!(l >= 0.0) || !std::isfinite(l)) throw ConfigError("bad lambda");
  }
  if (folds < 2) throw ConfigError("folds must be >= 2");
  if (cv_metric != "js" && cv_metric != "mse") {
    throw ConfigError("cv_metric must be js or mse");
  }
  train.validate();
}

LabelPropConfig LabelPropConfig::from_json(const json& j) {
  static const std::set<std::string> known = {
      "K",      "n_train", "n_test",    "mean_labels", "doc_lengths",
      "mixtures", "losses", "lambdas",  "folds",       "cv_metric",
      "train",  "seed",    "threads"};
  if (!j.is_object()) throw ConfigError("labelprop config must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  LabelPropConfig cfg;
  cfg.seed = default_seed();
  try {
    cfg.num_labels = j.value("K", cfg.num_labels);
    cfg.n_train = j.value("n_train", cfg.n_train);
    cfg.n_test = j.value("n_test", cfg.n_test);
    cfg.mean_labels = j.value("mean_labels", cfg.mean_labels);
    cfg.doc_lengths = j.value("doc_lengths", cfg.doc_lengths);
    if (j.contains("mixtures")) {
      cfg.mixtures.clear();
      for (const auto& m : j.at("mixtures")) {
        cfg.mixtures.push_back(mixture_from_string(m.get<std::string>()));
      }
    }
    if (j.contains("losses")) {
      cfg.losses.clear();
      for (const auto& l : j.at("losses")) {
        cfg.losses.push_back(loss_kind_from_string(l.get<std::string>()));
      }
    }
    cfg.lambdas = j.value("lambdas", cfg.lambdas);
    cfg.folds = j.value("folds", cfg.folds);
    cfg.cv_metric = j.value("cv_metric", cfg.cv_metric);
    if (j.contains("train")) cfg.train = train_from_json(j.at("train"), cfg.train);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.threads = j.value("threads", cfg.threads);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("labelprop config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

json LabelPropConfig::to_json() const {
  json mix = json::array();
  for (Mixture m : mixtures) mix.push_back(smax::to_string(m));
  json loss = json::array();
  for (LossKind l : losses) loss.push_back(smax::to_string(l));
  return {{"K", num_labels},
          {"n_train", n_train},
          {"n_test", n_test},
          {"mean_labels", mean_labels},
          {"doc_lengths", doc_lengths},
          {"mixtures", mix},
          {"losses", loss},
          {"lambdas", lambdas},
          {"folds", folds},
          {"cv_metric", cv_metric},
          {"train", train_to_json(train)},
          {"seed", seed}};
}

json run_labelprop(LabelPropConfig cfg, const RunOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  if (opts.seed_override) cfg.seed = *opts.seed_override;
  cfg.validate();

  struct DataCell {
    Mixture mixture;
    double doc_length;
  };
  std::vector<DataCell> data_cells;
  for (Mixture m : cfg.mixtures) {
    for (double len : cfg.doc_lengths) data_cells.push_back({m, len});
  }
  const std::size_t n_losses = cfg.losses.size();
  std::vector<json> results(data_cells.size() * n_losses);

  const bool use_js = cfg.cv_metric == "js";
  const ValidationMetric metric = [use_js](const LinearModel& model,
                                           const LabeledDataset& valid,
                                           double) {
    std::vector<Vector> pred;
    pred.reserve(valid.size());
    for (std::size_t i = 0; i < valid.size(); ++i) {
      pred.push_back(predict_distribution(model, valid.features(i)));
    }
    const MetricReport r = distribution_report(valid, pred);
    return -(use_js ? r.js_divergence : r.mse);
  };

  parallel_for(data_cells.size(), cfg.threads, [&](std::size_t c) {
    Rng stream = Rng::stream(cfg.seed, c);
    SyntheticConfig syn;
    syn.num_labels = cfg.num_labels;
    syn.n_train = cfg.n_train;
    syn.n_test = cfg.n_test;
    syn.mean_labels = cfg.mean_labels;
    syn.mean_doc_length = data_cells[c].doc_length;
    syn.mixture = data_cells[c].mixture;
    syn.seed = stream.next_u64();
    const std::uint64_t fold_seed = stream.next_u64();
    const DatasetSplit split = generate_synthetic(syn);

    for (std::size_t l = 0; l < n_losses; ++l) {
      const LossKind loss = cfg.losses[l];
      const CvResult cv = cross_validate(split.train, cfg.lambdas, {0.0},
                                         cfg.folds, metric, cfg.train, loss,
                                         fold_seed);
      TrainConfig final_cfg = cfg.train;
      final_cfg.lambda = cv.best_lambda;
      TrainTrace trace;
      const LinearModel model = fit(split.train, final_cfg, loss, &trace);

      std::vector<Vector> pred;
      pred.reserve(split.test.size());
      for (std::size_t i = 0; i < split.test.size(); ++i) {
        pred.push_back(predict_distribution(model, split.test.features(i)));
      }
      const MetricReport report = distribution_report(split.test, pred);
      double mean_support = 0.0;
      for (const Vector& p : pred) {
        for (double v : p) mean_support += v > 0.0 ? 1.0 : 0.0;
      }
      mean_support /= static_cast<double>(pred.size());

      results[c * n_losses + l] = {
          {"cell_index", c * n_losses + l},
          {"mixture", to_string(data_cells[c].mixture)},
          {"doc_length", data_cells[c].doc_length},
          {"loss", to_string(loss)},
          {"lambda", cv.best_lambda},
          {"cv_score", cv.best_score},
          {"test_mse", report.mse},
          {"test_js", report.js_divergence},
          {"mean_support_size", mean_support},
          {"epochs", trace.epochs},
          {"n_test", report.n_examples}};
    }
  });

  json out;
  out["config_echo"] = cfg.to_json();
  out["per_cell_results"] = results;
  if (opts.record_time) {
    out["wall_time_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
  } else {
    out["wall_time_seconds"] = nullptr;
  }
  return out;
}

// ---------------------------------------------------------------------------
// multilabel

const char* to_string(MultilabelMethod m) {
  switch (m) {
    case MultilabelMethod::kLogistic:
      return "logistic";
    case MultilabelMethod::kSoftmax:
      return "softmax";
    case MultilabelMethod::kSparsemax:
      return "sparsemax";
  }
  return "unknown";
}

MultilabelMethod multilabel_method_from_string(const std::string& name) {
  if (name == "logistic") return MultilabelMethod::kLogistic;
  if (name == "softmax") return MultilabelMethod::kSoftmax;
  if (name == "sparsemax") return MultilabelMethod::kSparsemax;
  throw ConfigError("unknown method '" + name +
                    "' (expected logistic, softmax, or sparsemax)");
}

LossKind method_loss(MultilabelMethod m) {
  switch (m) {
    case MultilabelMethod::kLogistic:
      return LossKind::kBinaryLogistic;
    case MultilabelMethod::kSoftmax:
      return LossKind::kLogistic;
    case MultilabelMethod::kSparsemax:
      return LossKind::kSparsemax;
  }
  throw ConfigError("unknown method");
}

DecisionRule::Kind method_rule(MultilabelMethod m) {
  switch (m) {
    case MultilabelMethod::kLogistic:
      return DecisionRule::Kind::kLogisticThreshold;
    case MultilabelMethod::kSoftmax:
      return DecisionRule::Kind::kSoftmaxThreshold;
    case MultilabelMethod::kSparsemax:
      return DecisionRule::Kind::kSparsemaxScale;
  }
  throw ConfigError("unknown method");
}

std::vector<double> default_rule_grid(MultilabelMethod m,
                                      std::size_t num_labels) {
  std::vector<double> grid;
  for (int n = 1; n <= 10; ++n) {
    switch (m) {
      case MultilabelMethod::kLogistic:
        grid.push_back(0.05 * n);
        break;
      case MultilabelMethod::kSoftmax: {
        const double p0 = static_cast<double>(n) / static_cast<double>(num_labels);
        if (p0 <= 1.0) grid.push_back(p0);
        break;
      }
      case MultilabelMethod::kSparsemax:
        grid.push_back(0.5 * n);
        break;
    }
  }
  return grid;
}

std::vector<double> default_multilabel_lambdas() { return powers_of_ten(-8, 2); }

MultilabelConfig::MultilabelConfig() {
  train.max_epochs = 100;
  seed = default_seed();
}

json MultilabelConfig::to_json() const {
  return {{"train_path", train_path.string()},
          {"test_path", test_path.string()},
          {"method", smax::to_string(method)},
          {"lambdas", lambdas},
          {"rule_params", rule_params},
          {"folds", folds},
          {"cv_metric", cv_metric},
          {"standardize", standardize},
          {"label_base", label_base},
          {"train", train_to_json(train)},
          {"seed", seed}};
}

F1Scores evaluate_rule(const LinearModel& model, const LabeledDataset& data,
                       const DecisionRule& rule) {
  std::vector<LabelSet> predicted, gold;
  predicted.reserve(data.size());
  gold.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    predicted.push_back(predict_labels(model, data.features(i), rule));
    gold.push_back(data.labels(i));
  }
  return micro_macro_f1(predicted, gold, data.num_labels());
}

json run_multilabel(const MultilabelConfig& input, const RunOptions& opts,
                    std::ostream* log) {
  const auto start = std::chrono::steady_clock::now();
  MultilabelConfig cfg = input;
  if (opts.seed_override) cfg.seed = *opts.seed_override;
  if (cfg.cv_metric != "micro_f1" && cfg.cv_metric != "macro_f1") {
    throw ConfigError("cv_metric must be micro_f1 or macro_f1");
  }
  cfg.train.seed = cfg.seed;

  LibsvmOptions lopts;
  lopts.label_base = cfg.label_base;
  LibsvmReadResult train_read = read_libsvm_multilabel(cfg.train_path, lopts);
  LibsvmReadResult test_read = read_libsvm_multilabel(cfg.test_path, lopts);
  if (log != nullptr) {
    if (train_read.dropped_unlabeled > 0) {
      *log << "warning: dropped " << train_read.dropped_unlabeled
           << " unlabeled line(s) from " << cfg.train_path.string() << "\n";
    }
    if (test_read.dropped_unlabeled > 0) {
      *log << "warning: dropped " << test_read.dropped_unlabeled
           << " unlabeled line(s) from " << cfg.test_path.string() << "\n";
    }
  }
  const std::size_t num_labels =
      std::max(train_read.data.num_labels(), test_read.data.num_labels());
  const std::size_t num_features =
      std::max(train_read.data.num_features(), test_read.data.num_features());
  LabeledDataset train = train_read.data.resized(num_features, num_labels);
  LabeledDataset test = test_read.data.resized(num_features, num_labels);
  if (cfg.standardize) {
    Standardized st = standardize_features(train, test);
    train = std::move(st.train);
    test = std::move(st.test);
  }

  if (cfg.lambdas.empty()) cfg.lambdas = default_multilabel_lambdas();
  if (cfg.rule_params.empty()) {
    cfg.rule_params = default_rule_grid(cfg.method, num_labels);
  }
  const LossKind loss = method_loss(cfg.method);
  const DecisionRule::Kind rule_kind = method_rule(cfg.method);
  for (double r : cfg.rule_params) DecisionRule{rule_kind, r}.validate();

  double best_lambda = cfg.lambdas.front();
  double best_rule = cfg.rule_params.front();
  json cv_score = nullptr;
  json cv_cells = json::array();
  if (cfg.lambdas.size() > 1 || cfg.rule_params.size() > 1) {
    const bool micro = cfg.cv_metric == "micro_f1";
    const ValidationMetric metric = [rule_kind, micro](
                                        const LinearModel& model,
                                        const LabeledDataset& valid,
                                        double param) {
      const F1Scores f = evaluate_rule(model, valid, {rule_kind, param});
      return micro ? f.micro : f.macro;
    };
    const CvResult cv = cross_validate(train, cfg.lambdas, cfg.rule_params,
                                       cfg.folds, metric, cfg.train, loss,
                                       splitmix64(cfg.seed));
    best_lambda = cv.best_lambda;
    best_rule = cv.best_rule_param;
    cv_score = cv.best_score;
    for (const CvCell& cell : cv.cells) {
      cv_cells.push_back({{"lambda", cell.lambda},
                          {"rule_param", cell.rule_param},
                          {"mean_score", cell.mean_score}});
    }
  }

  TrainConfig final_cfg = cfg.train;
  final_cfg.lambda = best_lambda;
  TrainTrace trace;
  const LinearModel model = fit(train, final_cfg, loss, &trace);
  const F1Scores f = evaluate_rule(model, test, {rule_kind, best_rule});

  json cell = {{"cell_index", 0},
               {"method", to_string(cfg.method)},
               {"loss", to_string(loss)},
               {"lambda", best_lambda},
               {"rule_param", best_rule},
               {"cv_score", cv_score},
               {"cv_grid", cv_cells},
               {"micro_f1", f.micro},
               {"macro_f1", f.macro},
               {"epochs", trace.epochs},
               {"num_labels", num_labels},
               {"num_features", num_features},
               {"n_train", train.size()},
               {"n_test", test.size()},
               {"dropped_train", train_read.dropped_unlabeled},
               {"dropped_test", test_read.dropped_unlabeled}};

  json out;
  out["config_echo"] = cfg.to_json();
  out["per_cell_results"] = json::array({cell});
  if (opts.record_time) {
    out["wall_time_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
  } else {
    out["wall_time_seconds"] = nullptr;
  }
  return out;
}

}  // namespace smax
