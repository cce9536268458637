// Command-line front end: transform score vectors, run the label-proportion
// sweep, run multi-label classification, and export generated datasets.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sparsemax/dataset.hpp"
#include "sparsemax/errors.hpp"
#include "sparsemax/experiments.hpp"

namespace {

using namespace smax;

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << contents;
  if (!out) throw ConfigError("write failed for " + path);
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Softmax / sparsemax transforms, losses, and experiments"};
  app.require_subcommand(1);

  // transform
  auto* transform = app.add_subcommand(
      "transform", "softmax, sparsemax, support, and tau per score vector");
  std::string transform_format = "json";
  std::string transform_input;
  transform->add_option("--format", transform_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  transform->add_option("--input", transform_input,
                        "input file (default: stdin)");

  // labelprop
  auto* labelprop = app.add_subcommand(
      "labelprop", "synthetic label-proportion estimation sweep");
  std::string lp_config;
  std::string lp_out;
  std::optional<std::uint64_t> lp_seed;
  std::optional<std::size_t> lp_threads;
  bool lp_time = false;
  labelprop->add_option("--config", lp_config, "JSON config")->required();
  labelprop->add_option("--out", lp_out, "result JSON path")->required();
  labelprop->add_option("--seed", lp_seed, "override the config seed");
  labelprop->add_option("--threads", lp_threads, "concurrent sweep cells");
  labelprop->add_flag("--record-time", lp_time,
                      "store wall_time_seconds (makes output run-dependent)");

  // multilabel
  auto* multilabel = app.add_subcommand(
      "multilabel", "multi-label classification on LIBSVM files");
  MultilabelConfig ml;
  std::string ml_method = "sparsemax";
  std::string ml_out;
  std::optional<std::uint64_t> ml_seed;
  bool ml_no_standardize = false;
  bool ml_time = false;
  multilabel->add_option("--train", ml.train_path, "training file")
      ->required()
      ->check(CLI::ExistingFile);
  multilabel->add_option("--test", ml.test_path, "test file")
      ->required()
      ->check(CLI::ExistingFile);
  multilabel->add_option("--method", ml_method, "logistic, softmax, sparsemax")
      ->required()
      ->check(CLI::IsMember({"logistic", "softmax", "sparsemax"}));
  multilabel->add_option("--out", ml_out, "result JSON path")->required();
  multilabel->add_option("--seed", ml_seed, "seed for folds and training");
  multilabel->add_option("--lambdas", ml.lambdas, "regularization grid")
      ->delimiter(',');
  multilabel->add_option("--rule-params", ml.rule_params,
                         "decision-rule grid (delta, p0, or t)")
      ->delimiter(',');
  multilabel->add_option("--folds", ml.folds, "cross-validation folds");
  multilabel->add_option("--cv-metric", ml.cv_metric, "micro_f1 or macro_f1")
      ->check(CLI::IsMember({"micro_f1", "macro_f1"}));
  multilabel->add_option("--label-base", ml.label_base,
                         "index of the first label in the files");
  multilabel->add_option("--max-epochs", ml.train.max_epochs,
                         "gradient-descent epochs");
  multilabel->add_flag("--no-standardize", ml_no_standardize,
                       "keep raw feature scales");
  multilabel->add_flag("--record-time", ml_time, "store wall_time_seconds");

  // generate
  auto* generate = app.add_subcommand(
      "generate", "write generated datasets in LIBSVM multi-label format");
  std::string gen_kind = "separable";
  std::string gen_train;
  std::string gen_test;
  std::size_t gen_k = 6;
  std::size_t gen_n_train = 200;
  std::size_t gen_n_test = 200;
  std::size_t gen_max_labels = 3;
  double gen_noise = 0.1;
  double gen_mean_labels = 2.0;
  double gen_doc_length = 200.0;
  std::string gen_mixture = "uniform";
  std::optional<std::uint64_t> gen_seed;
  std::size_t gen_unlabeled = 0;
  generate->add_option("--kind", gen_kind, "separable or labelprop")
      ->check(CLI::IsMember({"separable", "labelprop"}));
  generate->add_option("--train-out", gen_train)->required();
  generate->add_option("--test-out", gen_test)->required();
  generate->add_option("--labels", gen_k, "number of labels K");
  generate->add_option("--n-train", gen_n_train);
  generate->add_option("--n-test", gen_n_test);
  generate->add_option("--max-labels", gen_max_labels,
                       "separable: labels per example upper bound");
  generate->add_option("--noise", gen_noise, "separable: feature jitter");
  generate->add_option("--mean-labels", gen_mean_labels, "labelprop");
  generate->add_option("--doc-length", gen_doc_length, "labelprop");
  generate->add_option("--mixture", gen_mixture, "labelprop")
      ->check(CLI::IsMember({"uniform", "random_dirichlet"}));
  generate->add_option("--unlabeled-lines", gen_unlabeled,
                       "append this many label-free lines to the train file");
  generate->add_option("--seed", gen_seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*transform) {
      const TableFormat fmt = table_format_from_string(transform_format);
      if (transform_input.empty()) {
        run_transform(std::cin, std::cout, fmt);
      } else {
        std::ifstream in(transform_input);
        if (!in) throw ConfigError("cannot open " + transform_input);
        run_transform(in, std::cout, fmt);
      }
    } else if (*labelprop) {
      LabelPropConfig cfg = LabelPropConfig::from_json(read_json_file(lp_config));
      if (lp_threads) cfg.threads = *lp_threads;
      RunOptions opts{lp_seed, lp_time};
      write_file(lp_out, dump_result(run_labelprop(cfg, opts)));
    } else if (*multilabel) {
      ml.method = multilabel_method_from_string(ml_method);
      ml.standardize = !ml_no_standardize;
      RunOptions opts{ml_seed, ml_time};
      write_file(ml_out, dump_result(run_multilabel(ml, opts, &std::cerr)));
    } else if (*generate) {
      const std::uint64_t seed = gen_seed.value_or(default_seed());
      DatasetSplit split{LabeledDataset(1, 1), LabeledDataset(1, 1)};
      if (gen_kind == "separable") {
        split.train = generate_separable_multilabel(gen_k, gen_n_train,
                                                    gen_max_labels, gen_noise,
                                                    splitmix64(seed));
        split.test = generate_separable_multilabel(gen_k, gen_n_test,
                                                   gen_max_labels, gen_noise,
                                                   splitmix64(seed + 1));
      } else {
        SyntheticConfig syn;
        syn.num_labels = gen_k;
        syn.n_train = gen_n_train;
        syn.n_test = gen_n_test;
        syn.mean_labels = gen_mean_labels;
        syn.mean_doc_length = gen_doc_length;
        syn.mixture = mixture_from_string(gen_mixture);
        syn.seed = seed;
        split = generate_synthetic(syn);
      }
      std::ostringstream train_text;
      write_libsvm_multilabel(train_text, split.train);
      for (std::size_t i = 0; i < gen_unlabeled; ++i) train_text << "1:0.5\n";
      write_file(gen_train, train_text.str());
      std::ostringstream test_text;
      write_libsvm_multilabel(test_text, split.test);
      write_file(gen_test, test_text.str());
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
