#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sparsemax/dataset.hpp"
#include "sparsemax/linear_model.hpp"
#include "sparsemax/metrics.hpp"

namespace smax {

inline constexpr const char* kSeedEnvVar = "SPARSEMAX_SEED";

// Seed used when neither a flag nor a config supplies one: $SPARSEMAX_SEED
// if set and numeric, else 1.
std::uint64_t default_seed();

// ---------------------------------------------------------------------------
// transform: one score vector per input line (whitespace or comma separated;
// blank lines and lines starting with '#' skipped).

enum class TableFormat { kJson, kCsv };

TableFormat table_format_from_string(const std::string& name);

// Writes one record per score vector: JSON Lines objects
// {"softmax", "sparsemax", "support", "tau"} or CSV rows with ';'-joined
// vectors under a header. Support indices are 0-based. Returns the number
// of rows; throws ParseError on a malformed line.
std::size_t run_transform(std::istream& in, std::ostream& out,
                          TableFormat format);

// ---------------------------------------------------------------------------
// labelprop

struct LabelPropConfig {
  std::size_t num_labels = 10;
  std::size_t n_train = 300;
  std::size_t n_test = 300;
  double mean_labels = 2.0;
  std::vector<double> doc_lengths{200, 800, 1400, 2000};
  std::vector<Mixture> mixtures{Mixture::kUniform, Mixture::kRandomDirichlet};
  std::vector<LossKind> losses{LossKind::kLogistic, LossKind::kSparsemax};
  std::vector<double> lambdas;  // default {1e-9, ..., 1}
  std::size_t folds = 5;
  std::string cv_metric = "js";  // "js" or "mse", minimized
  TrainConfig train;
  std::uint64_t seed = 1;
  std::size_t threads = 1;

  LabelPropConfig();
  // Throws ConfigError on unknown keys or bad values.
  static LabelPropConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  void validate() const;
};

struct RunOptions {
  std::optional<std::uint64_t> seed_override;
  bool record_time = false;
};

// Sweeps (mixture, doc length) data cells. Each data cell draws its own
// dataset from an RNG stream keyed by (seed, cell index) and trains every
// loss on it with lambda picked by cross-validation. Returns
// {config_echo, per_cell_results[], wall_time_seconds}; wall time is null
// unless requested so that repeated runs are byte-identical.
nlohmann::json run_labelprop(LabelPropConfig cfg, const RunOptions& opts = {});

// ---------------------------------------------------------------------------
// multilabel

enum class MultilabelMethod { kLogistic, kSoftmax, kSparsemax };

const char* to_string(MultilabelMethod m);
MultilabelMethod multilabel_method_from_string(const std::string& name);

// Loss trained and decision rule used by each method.
LossKind method_loss(MultilabelMethod m);
DecisionRule::Kind method_rule(MultilabelMethod m);
// Default rule grid: delta in {.05 n}, p0 in {n / K} (entries above 1
// dropped), t in {.5 n}, for n = 1..10.
std::vector<double> default_rule_grid(MultilabelMethod m,
                                      std::size_t num_labels);
std::vector<double> default_multilabel_lambdas();  // {1e-8, ..., 1e2}

struct MultilabelConfig {
  std::filesystem::path train_path;
  std::filesystem::path test_path;
  MultilabelMethod method = MultilabelMethod::kSparsemax;
  std::vector<double> lambdas;     // empty = default grid
  std::vector<double> rule_params; // empty = default grid
  std::size_t folds = 5;
  std::string cv_metric = "micro_f1";  // or "macro_f1"
  bool standardize = true;
  std::size_t label_base = 1;
  TrainConfig train;
  std::uint64_t seed = 1;

  MultilabelConfig();
  nlohmann::json to_json() const;
};

// Warnings (e.g. dropped unlabeled lines) are written to `log` if non-null.
nlohmann::json run_multilabel(const MultilabelConfig& cfg,
                              const RunOptions& opts = {},
                              std::ostream* log = nullptr);

// Evaluates a trained model's rule predictions on a dataset.
F1Scores evaluate_rule(const LinearModel& model, const LabeledDataset& data,
                       const DecisionRule& rule);

// Serialized form used for all result files: 2-space indented JSON plus a
// trailing newline.
std::string dump_result(const nlohmann::json& j);

}  // namespace smax
