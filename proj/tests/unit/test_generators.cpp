#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "accsplit/envelopes.hpp"
#include "accsplit/errors.hpp"
#include "accsplit/generators.hpp"
#include "accsplit/reference.hpp"
#include "oracles.hpp"

using namespace accsplit;

TEST(GenLasso, RankDeficientQuadratic) {
  const auto gen = gen_lasso(20, 100, LambdaRule::fraction_of_max(0.1), 7);
  const auto* quad = gen.problem.f().as_quadratic();
  ASSERT_NE(quad, nullptr);
  EXPECT_EQ(quad->Q.rows(), 100);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(quad->Q, Eigen::EigenvaluesOnly);
  EXPECT_LE(eig.eigenvalues().minCoeff(), 1e-10);
  EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-10);
  EXPECT_EQ(gen.problem.m(), 0.0);
  EXPECT_NEAR(gen.problem.L(), eig.eigenvalues().maxCoeff(), 1e-12);
  EXPECT_EQ(gen.data.rows(), 20);
  EXPECT_EQ((gen.x_true.array() != 0.0).count(), 10);
  EXPECT_NEAR(gen.lambda, 0.1 * quad->q.lpNorm<Eigen::Infinity>(), 1e-15);
}

TEST(GenLasso, Deterministic) {
  const auto a = gen_lasso(20, 100, LambdaRule::fraction_of_max(0.1), 7);
  const auto b = gen_lasso(20, 100, LambdaRule::fraction_of_max(0.1), 7);
  const auto c = gen_lasso(20, 100, LambdaRule::fraction_of_max(0.1), 8);
  EXPECT_EQ(a.data, b.data);
  EXPECT_EQ(a.problem.f().as_quadratic()->Q, b.problem.f().as_quadratic()->Q);
  EXPECT_EQ(a.problem.f().as_quadratic()->q, b.problem.f().as_quadratic()->q);
  EXPECT_NE(a.data, c.data);
}

TEST(GenLasso, MinimizerSatisfiesKkt) {
  const auto gen = gen_lasso(20, 100, LambdaRule::fraction_of_max(0.1), 7);
  const double mu = 0.5 / gen.problem.L();
  const auto ref = solve_reference(gen.problem, mu);
  EXPECT_LE(ref.residual, 1e-10);
  const Vector& x = ref.reference.x_star;
  const Vector corr = -gen.problem.f().gradient(x);  // E'(b - E x)
  for (Index i = 0; i < x.size(); ++i) {
    if (x(i) != 0.0) {
      EXPECT_NEAR(corr(i), gen.lambda * (x(i) > 0 ? 1.0 : -1.0), 1e-8);
    } else {
      EXPECT_LE(std::abs(corr(i)), gen.lambda + 1e-8);
    }
  }
}

TEST(GenLasso, FixedLambdaAndErrors) {
  EXPECT_EQ(gen_lasso(5, 10, LambdaRule::fixed(0.3), 1).lambda, 0.3);
  EXPECT_THROW((void)gen_lasso(0, 10, LambdaRule::fixed(0.3), 1), InvalidInput);
  EXPECT_THROW((void)gen_lasso(5, 10, LambdaRule::fixed(-1.0), 1), InvalidInput);
}

TEST(GenBoxQp, PlantedConditionNumber) {
  const auto gen = gen_boxqp(50, 1e3, 3);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gen.problem.f().as_quadratic()->Q, Eigen::EigenvaluesOnly);
  EXPECT_NEAR(eig.eigenvalues().minCoeff(), 1.0, 1e-9);
  EXPECT_NEAR(eig.eigenvalues().maxCoeff(), 1e3, 1e-9);
  EXPECT_EQ(gen.problem.m(), 1.0);
  EXPECT_EQ(gen.problem.L(), 1e3);
}

TEST(GenBoxQp, MinimizerSatisfiesKkt) {
  const auto gen = gen_boxqp(50, 1e3, 3);
  const auto ref = solve_reference(gen.problem, 0.5 / gen.problem.L());
  const Vector& x = ref.reference.x_star;
  const Vector r = -gen.problem.f().gradient(x);
  int active = 0;
  for (Index i = 0; i < x.size(); ++i) {
    ASSERT_GE(x(i), -1.0);
    ASSERT_LE(x(i), 1.0);
    if (x(i) == 1.0) {
      EXPECT_GE(r(i), -1e-8);
      ++active;
    } else if (x(i) == -1.0) {
      EXPECT_LE(r(i), 1e-8);
      ++active;
    } else {
      EXPECT_NEAR(r(i), 0.0, 1e-8);
    }
  }
  EXPECT_GT(active, 0);
}

TEST(GenBoxQp, DeterministicAndErrors) {
  EXPECT_EQ(gen_boxqp(10, 50.0, 2).problem.f().as_quadratic()->Q, gen_boxqp(10, 50.0, 2).problem.f().as_quadratic()->Q);
  EXPECT_THROW((void)gen_boxqp(1, 10.0, 1), InvalidInput);
  EXPECT_THROW((void)gen_boxqp(5, 0.5, 1), InvalidInput);
}

TEST(GenLogistic, ConstantsAndGradient) {
  const auto gen = gen_logistic(40, 80, 0.1, LambdaRule::fraction_of_max(0.1), 5);
  EXPECT_EQ(gen.problem.m(), 0.1);
  const auto* lr = gen.problem.f().as_logistic();
  ASSERT_NE(lr, nullptr);
  for (Index i = 0; i < lr->y.size(); ++i) EXPECT_TRUE(lr->y(i) == 0.0 || lr->y(i) == 1.0);
  std::mt19937_64 rng(5);
  for (int k = 0; k < 10; ++k) {
    const Vector x = oracle::random_vector(80, rng, 0.3);
    const Vector g = gen.problem.f().gradient(x);
    const Vector fd = oracle::fd_gradient([&](const Vector& z) { return gen.problem.f().value(z); }, x);
    EXPECT_LE((g - fd).norm() / std::max(1.0, g.norm()), 1e-6);
  }
}

TEST(GenLogistic, PaperScaleConditionNumber) {
  const auto gen = gen_logistic(200, 1000, 0.1, LambdaRule::fraction_of_max(0.1), 1);
  const double kappa = gen.problem.L() / gen.problem.m();
  EXPECT_GE(kappa, 1e5);
  EXPECT_LE(kappa, 1e6);
}

TEST(GenLogistic, Errors) {
  EXPECT_THROW((void)gen_logistic(10, 5, 0.0, LambdaRule::fraction_of_max(0.1), 1), InvalidInput);
  EXPECT_THROW((void)gen_logistic(10, 0, 0.1, LambdaRule::fraction_of_max(0.1), 1), InvalidInput);
}

TEST(GenQuadraticL1, PlantedSpectrum) {
  const auto gen = gen_quadratic_l1(20, 1.0, 10.0, 0.5, 1);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gen.problem.f().as_quadratic()->Q, Eigen::EigenvaluesOnly);
  EXPECT_NEAR(eig.eigenvalues().minCoeff(), 1.0, 1e-12);
  EXPECT_NEAR(eig.eigenvalues().maxCoeff(), 10.0, 1e-12);
  EXPECT_THROW((void)gen_quadratic_l1(5, 0.0, 10.0, 0.5, 1), InvalidInput);
}
