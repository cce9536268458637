#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sparsemax/errors.hpp"
#include "sparsemax/jacobian.hpp"
#include "sparsemax/rng.hpp"

using namespace smax;

namespace {

void expect_matrix_near(const JacobianMatrix& jac,
                        const std::vector<std::vector<double>>& ref,
                        double tol) {
  ASSERT_EQ(jac.dim(), ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) {
    for (std::size_t j = 0; j < ref.size(); ++j) {
      EXPECT_NEAR(jac(i, j), ref[i][j], tol) << "entry " << i << "," << j;
    }
  }
}

}  // namespace

TEST(SoftmaxJacobian, UniformPair) {
  expect_matrix_near(softmax_jacobian(std::vector{0.5, 0.5}),
                     {{0.25, -0.25}, {-0.25, 0.25}}, 0.0);
}

TEST(SoftmaxJacobian, SaturatedIsZero) {
  expect_matrix_near(softmax_jacobian(std::vector{1.0, 0.0}),
                     {{0.0, 0.0}, {0.0, 0.0}}, 0.0);
}

TEST(SoftmaxJacobian, MatchesFiniteDifferences) {
  const Vector z{0.3, -0.1, 0.4};
  const auto fd = oracle::fd_jacobian([](const Vector& x) { return softmax(x); }, z);
  expect_matrix_near(softmax_jacobian(softmax(z)), fd, 1e-6);
}

TEST(SoftmaxJacobian, RejectsNonSimplexInput) {
  EXPECT_THROW(softmax_jacobian(std::vector{0.7, 0.7}), InvalidInput);
  EXPECT_THROW(softmax_jacobian(std::vector{1.5, -0.5}), InvalidInput);
}

TEST(SparsemaxJacobian, HardSigmoidMiddle) {
  const Vector z{0.5, 0.0};
  const JacobianMatrix jac = sparsemax_jacobian(threshold_and_support(z), 2);
  expect_matrix_near(jac, {{0.5, -0.5}, {-0.5, 0.5}}, 0.0);
  const auto fd = oracle::fd_jacobian([](const Vector& x) { return sparsemax(x); }, z);
  expect_matrix_near(jac, fd, 1e-6);
}

TEST(SparsemaxJacobian, SingletonSupportIsZero) {
  const JacobianMatrix jac =
      sparsemax_jacobian(threshold_and_support(std::vector{2.0, 0.0}), 2);
  expect_matrix_near(jac, {{0.0, 0.0}, {0.0, 0.0}}, 0.0);
}

TEST(SparsemaxJacobian, FullSupportIsScaledLaplacianOfK3) {
  SupportSet s;
  s.indices = {0, 1, 2};
  const JacobianMatrix jac = sparsemax_jacobian(s, 3);
  // Laplacian of K3 is 3I - 11^T; divided by 3.
  const double d = 2.0 / 3.0, o = -1.0 / 3.0;
  expect_matrix_near(jac, {{d, o, o}, {o, d, o}, {o, o, d}}, 1e-15);
  for (std::size_t i = 0; i < 3; ++i) {
    double row = 0.0;
    for (double v : jac.row(i)) row += v;
    EXPECT_NEAR(row, 0.0, 1e-15);
  }
}

TEST(SparsemaxJacobian, RejectsOutOfRangeSupport) {
  SupportSet s;
  s.indices = {0, 5};
  EXPECT_THROW(sparsemax_jacobian(s, 3), InvalidInput);
  EXPECT_THROW(sparsemax_jvp(s, Vector(3, 1.0)), InvalidInput);
}

TEST(Jvp, ConstantDirectionIsAnnihilated) {
  const Vector z{0.4, -0.2, 0.1, 0.35};
  const Vector ones(4, 1.0);
  for (double v : softmax_jvp(softmax(z), ones)) EXPECT_NEAR(v, 0.0, 1e-16);
  for (double v : sparsemax_jvp(threshold_and_support(z), ones)) {
    EXPECT_NEAR(v, 0.0, 1e-16);
  }
}

TEST(Jvp, SoftmaxPairExample) {
  const Vector out = softmax_jvp(std::vector{0.5, 0.5}, std::vector{1.0, 0.0});
  EXPECT_DOUBLE_EQ(out[0], 0.25);
  EXPECT_DOUBLE_EQ(out[1], -0.25);
}

TEST(Jvp, SaturatedSparsemaxGivesZero) {
  const SupportSet s = threshold_and_support(std::vector{2.0, 0.0});
  EXPECT_EQ(sparsemax_jvp(s, std::vector{3.0, -7.0}), (Vector{0.0, 0.0}));
}

TEST(Jvp, DimensionMismatch) {
  EXPECT_THROW(softmax_jvp(std::vector{0.5, 0.5}, std::vector{1.0}),
               InvalidInput);
}

TEST(Jvp, MatchesDenseProduct) {
  Rng rng(41);
  for (int t = 0; t < 500; ++t) {
    const auto z = oracle::random_scores(rng, 8, 1.0);
    const auto v = oracle::random_scores(rng, 8, 1.0);
    const Vector p = softmax(z);
    EXPECT_LT(oracle::max_abs_diff(softmax_jvp(p, v),
                                   softmax_jacobian(p).apply(v)),
              1e-12);
    const SupportSet s = threshold_and_support(z);
    EXPECT_LT(oracle::max_abs_diff(sparsemax_jvp(s, v),
                                   sparsemax_jacobian(s, 8).apply(v)),
              1e-12);
  }
}

TEST(Jvp, SparsemaxOffSupportExactZeros) {
  const Vector z{3.0, 2.8, -1.0, 0.0, -4.0};
  const SupportSet s = threshold_and_support(z);
  const Vector out = sparsemax_jvp(s, std::vector{1.0, 2.0, 3.0, 4.0, 5.0});
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (!s.contains(j)) EXPECT_EQ(out[j], 0.0);
  }
}

TEST(Jvp, CounterTracksSupportOnly) {
  SupportSet s;
  s.indices = {3, 10, 999};
  JvpCounter counter;
  sparsemax_jvp_on_support(s, Vector(5000, 1.0), &counter);
  EXPECT_EQ(counter.reads, 6u);
  EXPECT_EQ(counter.writes, 3u);
}

TEST(JacobianProperties, SymmetricPsdNullSpace) {
  Rng rng(43);
  for (int t = 0; t < 300; ++t) {
    const std::size_t dim = 2 + rng.below(8);
    const auto z = oracle::random_scores(rng, dim, 1.0);
    for (const JacobianMatrix& jac :
         {softmax_jacobian(softmax(z)),
          sparsemax_jacobian(threshold_and_support(z), dim)}) {
      const Vector ones(dim, 1.0);
      for (double v : jac.apply(ones)) EXPECT_NEAR(v, 0.0, 1e-9);
      for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) EXPECT_EQ(jac(i, j), jac(j, i));
      }
      const auto v = oracle::random_scores(rng, dim, 1.0);
      const Vector jv = jac.apply(v);
      double quad = 0.0;
      for (std::size_t i = 0; i < dim; ++i) quad += v[i] * jv[i];
      EXPECT_GE(quad, -1e-12);
    }
  }
}
