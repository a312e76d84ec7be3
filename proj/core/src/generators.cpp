#include "accsplit/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "accsplit/errors.hpp"

namespace accsplit {

double LambdaRule::resolve(double lambda_max) const {
  const double lambda = kind == Kind::FractionOfMax ? value * lambda_max : value;
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InvalidInput("l1 weight must be positive and finite");
  }
  return lambda;
}

namespace {

Matrix gaussian(Index rows, Index cols, double mean, double stddev, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(mean, stddev);
  Matrix M(rows, cols);
  // filled row by row so the stream order does not depend on storage order
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      M(i, j) = normal(rng);
    }
  }
  return M;
}

Vector sparse_vector(Index n, std::mt19937_64& rng) {
  const Index support = std::max<Index>(1, static_cast<Index>(std::lround(0.1 * static_cast<double>(n))));
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  // Fisher-Yates by hand; std::shuffle is not specified bit-for-bit
  for (Index k = n - 1; k > 0; --k) {
    std::uniform_int_distribution<Index> pick(0, k);
    std::swap(idx[static_cast<std::size_t>(k)], idx[static_cast<std::size_t>(pick(rng))]);
  }
  std::normal_distribution<double> normal;
  Vector x = Vector::Zero(n);
  for (Index k = 0; k < support; ++k) {
    x(idx[static_cast<std::size_t>(k)]) = normal(rng);
  }
  return x;
}

Matrix haar_orthogonal(Index n, std::mt19937_64& rng) {
  const Matrix G = gaussian(n, n, 0.0, 1.0, rng);
  Eigen::HouseholderQR<Matrix> qr(G);
  Matrix U = qr.householderQ();
  // sign fix so U is Haar distributed
  const Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    if (R(j, j) < 0.0) {
      U.col(j) = -U.col(j);
    }
  }
  return U;
}

Matrix planted_spectrum(Index n, double lo, double hi, std::mt19937_64& rng, Matrix& U) {
  U = haar_orthogonal(n, rng);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector d(n);
  d(0) = lo;
  d(n - 1) = hi;
  for (Index j = 1; j + 1 < n; ++j) {
    d(j) = lo * std::exp(unit(rng) * std::log(hi / lo));
  }
  Matrix Q = U.transpose() * d.asDiagonal() * U;
  return 0.5 * (Q + Q.transpose());
}

void require_dims(Index s, Index n) {
  if (s < 1 || n < 1) {
    throw InvalidInput("problem dimensions must be positive");
  }
}

}  // namespace

GeneratedProblem gen_lasso(Index s, Index n, LambdaRule rule, std::uint64_t seed) {
  require_dims(s, n);
  std::mt19937_64 rng(seed);
  Matrix E = gaussian(s, n, 0.0, 1.0 / std::sqrt(static_cast<double>(s)), rng);
  Vector x_true = sparse_vector(n, rng);
  Vector b = E * x_true + 0.01 * gaussian(s, 1, 0.0, 1.0, rng).col(0);

  Matrix Q = E.transpose() * E;
  Q = 0.5 * (Q + Q.transpose());
  Vector q = -E.transpose() * b;
  const double lambda = rule.resolve(q.lpNorm<Eigen::Infinity>());

  Eigen::SelfAdjointEigenSolver<Matrix> eig(Q, Eigen::EigenvaluesOnly);
  const double L = eig.eigenvalues().maxCoeff();
  const double m = s < n ? 0.0 : std::max(0.0, eig.eigenvalues().minCoeff());

  GeneratedProblem out{CompositeProblem(SmoothFunction::quadratic(std::move(Q), std::move(q), m, L),
                                        NonsmoothFunction::l1(lambda)),
                       std::move(E), std::move(x_true), lambda};
  return out;
}

GeneratedProblem gen_boxqp(Index n, double kappa, std::uint64_t seed) {
  if (n < 2) {
    throw InvalidInput("box QP needs n >= 2");
  }
  if (!(kappa >= 1.0) || !std::isfinite(kappa)) {
    throw InvalidInput("box QP needs kappa >= 1");
  }
  std::mt19937_64 rng(seed);
  Matrix U;
  Matrix Q = planted_spectrum(n, 1.0, kappa, rng, U);
  Vector q = gaussian(n, 1, 0.0, std::sqrt(kappa), rng).col(0);

  GeneratedProblem out{
      CompositeProblem(SmoothFunction::quadratic(std::move(Q), std::move(q), 1.0, kappa),
                       NonsmoothFunction::box(Vector::Constant(n, -1.0), Vector::Constant(n, 1.0))),
      std::move(U), Vector(), 0.0};
  return out;
}

GeneratedProblem gen_logistic(Index s, Index n, double rho, LambdaRule rule, std::uint64_t seed,
                              double feature_mean) {
  require_dims(s, n);
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw InvalidInput("logistic ridge weight must be positive");
  }
  std::mt19937_64 rng(seed);
  Matrix A = gaussian(s, n, feature_mean, 1.0, rng);
  Vector x_true = sparse_vector(n, rng);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector y(s);
  for (Index i = 0; i < s; ++i) {
    const double p = 1.0 / (1.0 + std::exp(-A.row(i).dot(x_true)));
    y(i) = unit(rng) < p ? 1.0 : 0.0;
  }
  const Vector grad0 = A.transpose() * (Vector::Constant(s, 0.5) - y);
  const double lambda = rule.resolve(grad0.lpNorm<Eigen::Infinity>());

  GeneratedProblem out{CompositeProblem(SmoothFunction::logistic_ridge(A, y, rho), NonsmoothFunction::l1(lambda)),
                       std::move(A), std::move(x_true), lambda};
  return out;
}

GeneratedProblem gen_quadratic_l1(Index n, double m, double L, double lambda, std::uint64_t seed) {
  if (n < 2) {
    throw InvalidInput("quadratic problem needs n >= 2");
  }
  if (!(m > 0.0 && L >= m) || !std::isfinite(L)) {
    throw InvalidInput("quadratic problem needs 0 < m <= L");
  }
  std::mt19937_64 rng(seed);
  Matrix U;
  Matrix Q = planted_spectrum(n, m, L, rng, U);
  Vector q = gaussian(n, 1, 0.0, 1.0, rng).col(0);
  GeneratedProblem out{CompositeProblem(SmoothFunction::quadratic(std::move(Q), std::move(q), m, L),
                                        NonsmoothFunction::l1(lambda)),
                       std::move(U), Vector(), lambda};
  return out;
}

}  // namespace accsplit
