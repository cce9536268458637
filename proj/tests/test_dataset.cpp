#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <sstream>

#include "sparsemax/dataset.hpp"
#include "sparsemax/errors.hpp"
#include "sparsemax/rng.hpp"

using namespace smax;

TEST(Rng, StreamsAreReproducibleAndDistinct) {
  Rng a(7), b(7), c = Rng::stream(7, 0), d = Rng::stream(7, 1);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
  EXPECT_NE(c.next_u64(), d.next_u64());
}

TEST(Rng, MersenneTwisterReferenceOutput) {
  // The C++ standard pins the 10000th output of a default-seeded mt19937_64.
  std::mt19937_64 ref;
  ref.discard(9999);
  EXPECT_EQ(ref(), 9981545732273789042ULL);
  Rng rng(5489);
  for (int i = 0; i < 9999; ++i) rng.next_u64();
  EXPECT_EQ(rng.next_u64(), 9981545732273789042ULL);
}

TEST(Rng, PoissonMeanLargeAndSmall) {
  Rng rng(9);
  for (double mean : {0.5, 3.0, 200.0, 2000.0}) {
    double sum = 0.0;
    const int n = 4000;
    for (int i = 0; i < n; ++i) sum += static_cast<double>(rng.poisson(mean));
    EXPECT_NEAR(sum / n, mean, 5.0 * std::sqrt(mean / n)) << mean;
  }
}

TEST(Synthetic, TruncatedPoissonChiSquare) {
  Rng rng(13);
  const double mean = 2.0;
  const std::size_t max_count = 10;
  const int n = 20000;
  std::vector<double> observed(max_count, 0.0);
  for (int i = 0; i < n; ++i) {
    const std::size_t c = sample_truncated_poisson(rng, mean, max_count);
    ASSERT_GE(c, 1u);
    ASSERT_LE(c, max_count);
    observed[c - 1] += 1.0;
  }
  std::vector<double> pmf(max_count);
  double z = 0.0;
  for (std::size_t k = 1; k <= max_count; ++k) {
    pmf[k - 1] = std::exp(k * std::log(mean) - std::lgamma(k + 1.0) - mean);
    z += pmf[k - 1];
  }
  // Pool the tail so every expected count is >= 5.
  double chi2 = 0.0, tail_obs = 0.0, tail_exp = 0.0;
  int bins = 0;
  for (std::size_t k = 0; k < max_count; ++k) {
    const double expected = n * pmf[k] / z;
    if (expected >= 5.0) {
      chi2 += (observed[k] - expected) * (observed[k] - expected) / expected;
      ++bins;
    } else {
      tail_obs += observed[k];
      tail_exp += expected;
    }
  }
  if (tail_exp > 0.0) {
    chi2 += (tail_obs - tail_exp) * (tail_obs - tail_exp) / tail_exp;
    ++bins;
  }
  const boost::math::chi_squared dist(bins - 1);
  const double p_value = 1.0 - boost::math::cdf(dist, chi2);
  EXPECT_GT(p_value, 0.01) << "chi2=" << chi2;
}

TEST(Synthetic, TinyLabelMeanGivesDeltas) {
  SyntheticConfig cfg;
  cfg.mean_labels = 1e-9;
  cfg.n_train = 200;
  cfg.n_test = 10;
  const DatasetSplit s = generate_synthetic(cfg);
  for (std::size_t i = 0; i < s.train.size(); ++i) {
    const LabelSet labels = s.train.labels(i);
    ASSERT_EQ(labels.size(), 1u);
    EXPECT_EQ(s.train.target(i)[labels[0]], 1.0);
  }
}

TEST(Synthetic, UniformMixtureProportions) {
  SyntheticConfig cfg;
  cfg.n_train = 500;
  cfg.n_test = 1;
  const DatasetSplit s = generate_synthetic(cfg);
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < s.train.size(); ++i) {
    const LabelSet labels = s.train.labels(i);
    for (std::size_t k : labels) {
      EXPECT_EQ(s.train.target(i)[k], 1.0 / static_cast<double>(labels.size()));
    }
    if (labels.size() == 2) {
      ++pairs;
      EXPECT_EQ(s.train.target(i)[labels[0]], 0.5);
      EXPECT_EQ(s.train.target(i)[labels[1]], 0.5);
    }
  }
  EXPECT_GT(pairs, 0u);
}

TEST(Synthetic, RowsAreSparseDistributions) {
  for (Mixture m : {Mixture::kUniform, Mixture::kRandomDirichlet}) {
    SyntheticConfig cfg;
    cfg.mixture = m;
    cfg.n_train = 400;
    const DatasetSplit s = generate_synthetic(cfg);
    for (std::size_t i = 0; i < s.train.size(); ++i) {
      const auto q = s.train.target(i);
      double sum = 0.0;
      std::size_t nnz = 0;
      for (double v : q) {
        sum += v;
        nnz += v > 0.0;
      }
      EXPECT_NEAR(sum, 1.0, 1e-12);
      EXPECT_GE(nnz, 1u);
      EXPECT_LE(nnz, cfg.num_labels);
      double words = 0.0;
      for (double x : s.train.features(i)) {
        EXPECT_EQ(x, std::floor(x));
        words += x;
      }
      EXPECT_GE(words, 0.0);
    }
  }
}

TEST(Synthetic, MeanDocumentLength) {
  SyntheticConfig cfg;
  cfg.mean_doc_length = 150.0;
  cfg.n_train = 10000;
  cfg.n_test = 1;
  const DatasetSplit s = generate_synthetic(cfg);
  double total = 0.0;
  for (std::size_t i = 0; i < s.train.size(); ++i) {
    for (double x : s.train.features(i)) total += x;
  }
  const double mean = total / static_cast<double>(s.train.size());
  EXPECT_NEAR(mean, cfg.mean_doc_length, 0.03 * cfg.mean_doc_length);
}

TEST(Synthetic, DeterministicForSeed) {
  SyntheticConfig cfg;
  cfg.seed = 7;
  cfg.mixture = Mixture::kRandomDirichlet;
  const DatasetSplit a = generate_synthetic(cfg);
  const DatasetSplit b = generate_synthetic(cfg);
  EXPECT_TRUE(a.train == b.train);
  EXPECT_TRUE(a.test == b.test);
  cfg.seed = 8;
  EXPECT_FALSE(generate_synthetic(cfg).train == a.train);
}

TEST(Synthetic, InvalidConfig) {
  SyntheticConfig cfg;
  cfg.num_labels = 1;
  EXPECT_THROW(generate_synthetic(cfg), ConfigError);
  cfg = {};
  cfg.mean_doc_length = 0.0;
  EXPECT_THROW(generate_synthetic(cfg), ConfigError);
  cfg = {};
  cfg.n_test = 0;
  EXPECT_THROW(generate_synthetic(cfg), ConfigError);
}

TEST(Libsvm, ParsesGrammarExample) {
  std::istringstream in("1,3 2:1.5\n");
  LibsvmOptions opts;
  opts.num_labels = 3;
  const LibsvmReadResult r = read_libsvm_multilabel(in, opts);
  ASSERT_EQ(r.data.size(), 1u);
  EXPECT_EQ(r.data.labels(0), (LabelSet{0, 2}));
  const auto q = r.data.target(0);
  EXPECT_EQ(std::vector<double>(q.begin(), q.end()),
            (std::vector<double>{0.5, 0.0, 0.5}));
  ASSERT_EQ(r.data.num_features(), 2u);
  EXPECT_EQ(r.data.features(0)[1], 1.5);
  EXPECT_EQ(r.data.features(0)[0], 0.0);
}

TEST(Libsvm, DropsUnlabeledLines) {
  std::istringstream in("1 1:1\n2:3.0\n 1:2\n\n2,1 1:-1 3:2e-1\n");
  const LibsvmReadResult r = read_libsvm_multilabel(in);
  EXPECT_EQ(r.dropped_unlabeled, 2u);
  EXPECT_EQ(r.data.size(), 2u);
  EXPECT_EQ(r.data.num_labels(), 2u);
  EXPECT_EQ(r.data.num_features(), 3u);
  EXPECT_EQ(r.data.labels(1), (LabelSet{0, 1}));
  EXPECT_EQ(r.data.features(1)[2], 0.2);
}

TEST(Libsvm, ZeroBasedLabels) {
  std::istringstream in("0,5 1:1\n");
  LibsvmOptions opts;
  opts.label_base = 0;
  const LibsvmReadResult r = read_libsvm_multilabel(in, opts);
  EXPECT_EQ(r.data.num_labels(), 6u);
  EXPECT_EQ(r.data.labels(0), (LabelSet{0, 5}));
}

TEST(Libsvm, MalformedLinesReportLineNumber) {
  const std::vector<std::string> bad = {
      "1 1:1\n1 x:2\n", "1 1:1\n1 1:abc\n", "1 1:1\n1,a 1:2\n",
      "1 1:1\n1 0:2\n", "1 1:1\n1 12\n",    "1 1:1\n0 1:1\n"};
  for (const std::string& text : bad) {
    std::istringstream in(text);
    try {
      read_libsvm_multilabel(in);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), 2u) << text;
    }
  }
}

TEST(Libsvm, LabelBeyondDeclaredK) {
  std::istringstream in("4 1:1\n");
  LibsvmOptions opts;
  opts.num_labels = 3;
  EXPECT_THROW(read_libsvm_multilabel(in, opts), ParseError);
}

TEST(Libsvm, EmptyInputIsAnError) {
  std::istringstream in("2:1\n\n");
  EXPECT_THROW(read_libsvm_multilabel(in), EmptyDatasetError);
}

TEST(Libsvm, RoundTripPreservesUniformTargetData) {
  const LabeledDataset data = generate_separable_multilabel(5, 40, 3, 0.3, 21);
  std::stringstream buf;
  write_libsvm_multilabel(buf, data);
  LibsvmOptions opts;
  opts.num_labels = data.num_labels();
  opts.num_features = data.num_features();
  const LibsvmReadResult back = read_libsvm_multilabel(buf, opts);
  EXPECT_EQ(back.dropped_unlabeled, 0u);
  EXPECT_TRUE(back.data == data);
}

TEST(Standardize, ConstantFeatureCenteredOnly) {
  LabeledDataset train(2, 2), test(2, 2);
  const std::vector<double> q{1.0, 0.0};
  train.add(std::vector{5.0, 1.0}, q);
  train.add(std::vector{5.0, 3.0}, q);
  train.add(std::vector{5.0, 5.0}, q);
  test.add(std::vector{6.0, 9.0}, q);
  const Standardized s = standardize_features(train, test);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(s.train.features(i)[0], 0.0);
  EXPECT_EQ(s.test.features(0)[0], 1.0);
  EXPECT_EQ(s.means[1], 3.0);
  EXPECT_NEAR(s.stds[1], std::sqrt(8.0 / 3.0), 1e-15);
}

TEST(Standardize, TrainColumnsHaveZeroMeanUnitStd) {
  Rng rng(3);
  LabeledDataset train(1, 1), test(1, 1);
  for (int i = 0; i < 500; ++i) {
    train.add(std::vector{3.0 + 2.0 * rng.standard_normal()}, std::vector{1.0});
    test.add(std::vector{10.0 + rng.standard_normal()}, std::vector{1.0});
  }
  const Standardized s = standardize_features(train, test);
  double mean = 0.0, sq = 0.0, test_mean = 0.0;
  for (std::size_t i = 0; i < train.size(); ++i) {
    mean += s.train.features(i)[0];
    sq += s.train.features(i)[0] * s.train.features(i)[0];
    test_mean += s.test.features(i)[0];
  }
  mean /= 500.0;
  EXPECT_NEAR(mean, 0.0, 1e-10);
  EXPECT_NEAR(std::sqrt(sq / 500.0 - mean * mean), 1.0, 1e-10);
  // Test data uses train statistics, so its mean stays far from zero.
  EXPECT_GT(test_mean / 500.0, 2.0);
}

TEST(Dataset, RejectsBadRows) {
  LabeledDataset d(2, 2);
  EXPECT_THROW(d.add(std::vector{1.0}, std::vector{1.0, 0.0}), InvalidInput);
  EXPECT_THROW(d.add(std::vector{1.0, 2.0}, std::vector{0.6, 0.6}), InvalidInput);
  EXPECT_THROW(d.add(std::vector{NAN, 2.0}, std::vector{1.0, 0.0}), InvalidInput);
  EXPECT_THROW(d.add(std::vector{1.0, 2.0}, std::vector{0.0, 0.0}), InvalidInput);
}
