#include <gtest/gtest.h>

#include <random>

#include "contactsim/lcp.h"

namespace contactsim {
namespace {

LcpProblem Make(std::initializer_list<std::initializer_list<double>> v,
                std::initializer_list<double> p) {
  LcpProblem problem;
  const int n = static_cast<int>(p.size());
  problem.V.resize(n, n);
  problem.p.resize(n);
  int i = 0;
  for (const auto& row : v) {
    int j = 0;
    for (double x : row) problem.V(i, j++) = x;
    ++i;
  }
  i = 0;
  for (double x : p) problem.p(i++) = x;
  return problem;
}

// V = A'A + 1e-3 I with A uniform in [-1, 1], p uniform in [-1, 1].
LcpProblem RandomPsd(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = u(rng);
  LcpProblem problem;
  problem.V = a.transpose() * a + 1e-3 * Eigen::MatrixXd::Identity(n, n);
  problem.p.resize(n);
  for (int i = 0; i < n; ++i) problem.p(i) = u(rng);
  return problem;
}

TEST(LcpProblem, ValidateRejectsShapeAndNonFinite) {
  LcpProblem bad;
  bad.V = Eigen::MatrixXd::Identity(2, 3);
  bad.p = Eigen::VectorXd::Zero(2);
  EXPECT_THROW(bad.Validate(), std::invalid_argument);
  LcpProblem nan = Make({{1}}, {std::nan("")});
  EXPECT_THROW(nan.Validate(), std::invalid_argument);
}

TEST(SolveLemke, NonNegativeOffsetReturnsZero) {
  const auto s = SolveLemke(Make({{1}}, {1}));
  ASSERT_TRUE(s.solved());
  EXPECT_EQ(s.z(0), 0.0);
  EXPECT_EQ(s.w(0), 1.0);
  EXPECT_EQ(s.pivots, 0);
}

TEST(SolveLemke, ScalarActive) {
  const auto s = SolveLemke(Make({{1}}, {-1}));
  ASSERT_TRUE(s.solved());
  EXPECT_NEAR(s.z(0), 1.0, 1e-12);
  EXPECT_NEAR(s.w(0), 0.0, 1e-12);
}

TEST(SolveLemke, TwoByTwoMatchesEnumeration) {
  const LcpProblem problem = Make({{2, 1}, {1, 2}}, {-1, -1});
  const auto lemke = SolveLemke(problem);
  const auto oracle = SolveEnumeration(problem);
  ASSERT_TRUE(lemke.solved());
  ASSERT_TRUE(oracle.solved());
  EXPECT_NEAR(oracle.z(0), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(oracle.z(1), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(lemke.z(0), 1.0 / 3.0, 1e-10);
  EXPECT_NEAR(lemke.z(1), 1.0 / 3.0, 1e-10);
  EXPECT_NEAR(lemke.w.norm(), 0.0, 1e-10);
}

TEST(SolveLemke, UnsolvableEndsInRay) {
  // 0 * z - 1 >= 0 has no solution.
  const auto s = SolveLemke(Make({{0}}, {-1}));
  EXPECT_FALSE(s.solved());
  EXPECT_EQ(s.status, LcpStatus::kRayTermination);
}

TEST(SolveLemke, IterationLimitIsReported) {
  std::mt19937_64 rng(7);
  const LcpProblem problem = RandomPsd(rng, 6);
  LemkeOptions options;
  options.max_pivots = 1;
  const auto s = SolveLemke(problem, options);
  if (!s.solved()) EXPECT_EQ(s.status, LcpStatus::kIterationLimit);
}

TEST(SolveLemke, Deterministic) {
  std::mt19937_64 rng(11);
  const LcpProblem problem = RandomPsd(rng, 6);
  const auto a = SolveLemke(problem);
  const auto b = SolveLemke(problem);
  EXPECT_EQ(a.status, b.status);
  EXPECT_EQ(a.pivots, b.pivots);
  EXPECT_TRUE((a.z.array() == b.z.array()).all());
}

TEST(SolveLemke, DegenerateTiesResolve) {
  // Identical rows produce ratio-test ties on the first pivot.
  const LcpProblem problem = Make({{1, 1, 0}, {1, 1, 0}, {0, 0, 1}}, {-1, -1, -1});
  const auto s = SolveLemke(problem);
  ASSERT_TRUE(s.solved());
  EXPECT_LE(ComplementarityResidual(problem, s.z), 1e-8);
}

TEST(SolveEnumeration, Examples) {
  const auto zero = SolveEnumeration(Make({{1}}, {1}));
  ASSERT_TRUE(zero.solved());
  EXPECT_EQ(zero.z(0), 0.0);
  EXPECT_EQ(SolveEnumeration(Make({{0}}, {-1})).status, LcpStatus::kInfeasible);
}

TEST(SolveEnumeration, RejectsLargeProblems) {
  LcpProblem big;
  big.V = Eigen::MatrixXd::Identity(21, 21);
  big.p = Eigen::VectorXd::Ones(21);
  EXPECT_THROW(SolveEnumeration(big), std::invalid_argument);
}

TEST(CheckQpOptimality, Examples) {
  EXPECT_TRUE(CheckQpOptimality(Make({{1}}, {-1}), Eigen::VectorXd::Ones(1)));
  EXPECT_FALSE(CheckQpOptimality(Make({{1}}, {1}), Eigen::VectorXd::Ones(1)));
  EXPECT_TRUE(CheckQpOptimality(Make({{2, 1}, {1, 2}}, {-1, -1}),
                                Eigen::Vector2d(1.0 / 3.0, 1.0 / 3.0)));
  // Infeasible w.
  EXPECT_FALSE(CheckQpOptimality(Make({{1}}, {-1}), Eigen::VectorXd::Zero(1)));
}

TEST(LcpProperty, RandomOracleAgreement) {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> size(1, 6);
  for (int trial = 0; trial < 500; ++trial) {
    const LcpProblem problem = RandomPsd(rng, size(rng));
    const auto lemke = SolveLemke(problem);
    const auto oracle = SolveEnumeration(problem);
    ASSERT_TRUE(lemke.solved()) << "trial " << trial;
    ASSERT_TRUE(oracle.solved()) << "trial " << trial;
    EXPECT_LE(ComplementarityResidual(problem, lemke.z), 1e-8);
    EXPECT_LE(ComplementarityResidual(problem, oracle.z), 1e-8);
    EXPECT_TRUE(CheckQpOptimality(problem, lemke.z, 1e-8));
    EXPECT_TRUE(CheckQpOptimality(problem, oracle.z, 1e-8));
  }
}

TEST(LcpProperty, ScalingCovariance) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> size(1, 6);
  for (double c : {1e-3, 0.5, 7.0, 1e3}) {
    for (int trial = 0; trial < 50; ++trial) {
      const LcpProblem problem = RandomPsd(rng, size(rng));
      const LcpProblem scaled{c * problem.V, c * problem.p};
      const auto s = SolveLemke(scaled);
      ASSERT_TRUE(s.solved());
      EXPECT_TRUE(CheckQpOptimality(problem, s.z, 1e-8)) << "c = " << c;
    }
  }
}

}  // namespace
}  // namespace contactsim
