#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "sparsemax/errors.hpp"
#include "sparsemax/metrics.hpp"
#include "sparsemax/rng.hpp"

using namespace smax;

TEST(SquaredError, Cases) {
  EXPECT_EQ(squared_error(std::vector{0.3, 0.7}, std::vector{0.3, 0.7}), 0.0);
  EXPECT_EQ(squared_error(std::vector{1.0, 0.0}, std::vector{0.0, 1.0}), 2.0);
  EXPECT_THROW(squared_error(std::vector{1.0}, std::vector{0.5, 0.5}),
               InvalidInput);
}

TEST(SquaredError, MatchesNaiveLoop) {
  Rng rng(71);
  for (int t = 0; t < 100; ++t) {
    const auto q = rng.flat_dirichlet(7), p = rng.flat_dirichlet(7);
    double ref = 0.0;
    for (int i = 0; i < 7; ++i) ref += std::pow(q[i] - p[i], 2);
    EXPECT_NEAR(squared_error(q, p), ref, 1e-12);
  }
}

TEST(JsDivergence, Cases) {
  EXPECT_EQ(js_divergence(std::vector{0.2, 0.8}, std::vector{0.2, 0.8}), 0.0);
  EXPECT_NEAR(js_divergence(std::vector{1.0, 0.0}, std::vector{0.0, 1.0}),
              std::log(2.0), 1e-15);
  // 50-digit evaluation of the definition: 0.21576155433883570...
  EXPECT_NEAR(js_divergence(std::vector{0.5, 0.5}, std::vector{1.0, 0.0}),
              0.2157615543388357, 1e-15);
}

TEST(JsDivergence, SymmetricAndBounded) {
  Rng rng(73);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t dim = 2 + rng.below(9);
    const auto q = oracle::random_sparse_target(rng, dim);
    const auto p = oracle::random_sparse_target(rng, dim);
    const double a = js_divergence(q, p), b = js_divergence(p, q);
    EXPECT_NEAR(a, b, 1e-12);
    EXPECT_GE(a, 0.0);
    EXPECT_LE(a, std::log(2.0) + 1e-12);
  }
}

TEST(F1, PerfectPrediction) {
  const std::vector<LabelSet> gold{{0, 2}, {1}, {0}};
  const F1Scores f = micro_macro_f1(gold, gold, 3);
  EXPECT_EQ(f.micro, 1.0);
  EXPECT_EQ(f.macro, 1.0);
}

TEST(F1, EmptyPredictions) {
  const std::vector<LabelSet> gold{{0, 2}, {1}, {0}};
  const std::vector<LabelSet> none(3);
  const F1Scores f = micro_macro_f1(none, gold, 3);
  EXPECT_EQ(f.micro, 0.0);
  EXPECT_EQ(f.macro, 0.0);
}

TEST(F1, OnePerfectLabelTwoAbsent) {
  // Label 0 perfect (tp=2); labels 1 and 2 never gold, never predicted.
  // Per-label F1 = (1, 0, 0) -> macro 1/3; pooled tp=2, fp=fn=0 -> micro 1.
  const std::vector<LabelSet> gold{{0}, {0}, {}};
  const std::vector<LabelSet> pred{{0}, {0}, {}};
  const F1Scores f = micro_macro_f1(pred, gold, 3);
  EXPECT_NEAR(f.macro, 1.0 / 3.0, 1e-15);
  EXPECT_EQ(f.micro, 1.0);
}

TEST(F1, PooledCounts) {
  // tp: l0=1, l1=1; fp: l1=1 (ex 0), l2=1; fn: l0=1
  // micro = 2*2 / (2*2 + 2 + 1) = 4/7
  // per-label: l0 = 2/(2+0+1) = 2/3, l1 = 2/(2+1) = 2/3, l2 = 0 -> macro 4/9
  const std::vector<LabelSet> gold{{0}, {0, 1}, {}};
  const std::vector<LabelSet> pred{{0, 1}, {1}, {2}};
  const F1Scores f = micro_macro_f1(pred, gold, 3);
  EXPECT_NEAR(f.micro, 4.0 / 7.0, 1e-15);
  EXPECT_NEAR(f.macro, 4.0 / 9.0, 1e-15);
}

TEST(F1, LengthMismatch) {
  EXPECT_THROW(micro_macro_f1(std::vector<LabelSet>(2), std::vector<LabelSet>(3), 2),
               InvalidInput);
}

TEST(Report, AveragesPerExample) {
  LabeledDataset data(1, 2);
  data.add(std::vector{0.0}, std::vector{1.0, 0.0});
  data.add(std::vector{0.0}, std::vector{0.5, 0.5});
  const std::vector<Vector> pred{{0.0, 1.0}, {0.5, 0.5}};
  const MetricReport r = distribution_report(data, pred);
  EXPECT_EQ(r.n_examples, 2u);
  EXPECT_DOUBLE_EQ(r.mse, 1.0);
  EXPECT_NEAR(r.js_divergence, std::log(2.0) / 2.0, 1e-15);
}
