#pragma once

#include <cstdint>

#include "accsplit/problems.hpp"

namespace accsplit {

/// How the l1 weight is chosen: a fraction of the smallest weight for which
/// x = 0 is optimal, or a fixed value.
struct LambdaRule {
  enum class Kind { FractionOfMax, Fixed };
  Kind kind = Kind::FractionOfMax;
  double value = 0.1;

  static LambdaRule fraction_of_max(double fraction) { return {Kind::FractionOfMax, fraction}; }
  static LambdaRule fixed(double lambda) { return {Kind::Fixed, lambda}; }
  [[nodiscard]] double resolve(double lambda_max) const;
};

struct GeneratedProblem {
  CompositeProblem problem;
  /// E for lasso, A for logistic regression, the eigenbasis U for box QP.
  Matrix data;
  Vector x_true;
  double lambda = 0.0;
};

/// f = 1/2 ||E x - b||^2 stored as Q = E'E, q = -E'b, with E_ij ~ N(0, 1/s),
/// b = E x_true + 0.01 noise and x_true 10% sparse; g = lambda ||x||_1.
/// m = 0 when s < n.
[[nodiscard]] GeneratedProblem gen_lasso(Index s, Index n, LambdaRule rule, std::uint64_t seed);

/// Q = U'DU with U Haar-orthogonal and D log-uniform on [1, kappa] with both
/// ends planted, q ~ N(0, kappa I), box [-1, 1]^n.
[[nodiscard]] GeneratedProblem gen_boxqp(Index n, double kappa, std::uint64_t seed);

/// f = 1/2 x'Qx + q'x with Q = U'DU, D log-uniform on [m, L] (both ends
/// planted), q ~ N(0, I); g = lambda ||x||_1.
[[nodiscard]] GeneratedProblem gen_quadratic_l1(Index n, double m, double L, double lambda,
                                                std::uint64_t seed);

/// Rows a_i ~ N(feature_mean 1, I), labels y_i ~ Bernoulli(sigmoid(a_i'x_true))
/// with x_true 10% sparse; ridge rho. Non-centered features make A'A
/// ill-conditioned the way real design matrices are.
[[nodiscard]] GeneratedProblem gen_logistic(Index s, Index n, double rho, LambdaRule rule,
                                            std::uint64_t seed, double feature_mean = 1.0);

}  // namespace accsplit
