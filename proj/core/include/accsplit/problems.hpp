#pragma once

#include <functional>
#include <optional>
#include <variant>

#include <Eigen/Dense>

namespace accsplit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// ---------------------------------------------------------------------------
// Smooth part f
// ---------------------------------------------------------------------------

/// f(x) = 1/2 x'Qx + q'x with Q symmetric positive semidefinite.
struct QuadraticSmooth {
  Matrix Q;
  Vector q;
};

/// f(x) = sum_i [log(1 + exp(a_i'x)) - y_i a_i'x] + (ridge/2)||x||^2, rows of
/// A are the a_i and y_i in {0, 1}.
struct LogisticRidgeSmooth {
  Matrix A;
  Vector y;
  double ridge = 0.0;
};

/// User-supplied oracles. `hessian_vector` may be empty, in which case
/// envelope gradients and the inner prox solver are unavailable.
struct GenericSmooth {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  std::function<Vector(const Vector& x, const Vector& v)> hessian_vector;
};

/// Damped Newton solve used for prox_{mu f} when f is not quadratic.
struct InnerProxOptions {
  bool enabled = false;
  double tolerance = 1e-10;
  int max_iterations = 100;
};

class SmoothFunction {
 public:
  using Kind = std::variant<QuadraticSmooth, LogisticRidgeSmooth, GenericSmooth>;

  /// m and L are read off the extreme eigenvalues of Q (m clamped at 0).
  static SmoothFunction quadratic(Matrix Q, Vector q);
  /// Same, but with caller-supplied constants (e.g. m = 0 for a known
  /// rank-deficient Q, where the computed eigenvalue is only ~1e-15).
  static SmoothFunction quadratic(Matrix Q, Vector q, double m, double L);
  /// m = ridge, L = ridge + lambda_max(A'A)/4.
  static SmoothFunction logistic_ridge(Matrix A, Vector y, double ridge);
  static SmoothFunction generic(GenericSmooth oracle, Index dimension, double m, double L);

  [[nodiscard]] SmoothFunction with_inner_prox(InnerProxOptions options = {.enabled = true}) const;

  [[nodiscard]] Index dimension() const noexcept { return dimension_; }
  [[nodiscard]] double m() const noexcept { return m_; }
  [[nodiscard]] double L() const noexcept { return L_; }
  [[nodiscard]] const Kind& kind() const noexcept { return kind_; }
  [[nodiscard]] const QuadraticSmooth* as_quadratic() const noexcept {
    return std::get_if<QuadraticSmooth>(&kind_);
  }
  [[nodiscard]] const LogisticRidgeSmooth* as_logistic() const noexcept {
    return std::get_if<LogisticRidgeSmooth>(&kind_);
  }
  [[nodiscard]] const InnerProxOptions& inner_prox() const noexcept { return inner_prox_; }

  [[nodiscard]] bool has_hessian() const;
  /// prox_{mu f} is available: always for quadratics, otherwise only with the
  /// inner Newton solver enabled and a Hessian oracle present.
  [[nodiscard]] bool has_prox() const;

  [[nodiscard]] double value(const Vector& x) const;
  [[nodiscard]] Vector gradient(const Vector& x) const;
  [[nodiscard]] Vector hessian_vector(const Vector& x, const Vector& v) const;
  /// Dense Hessian; for generic oracles assembled column by column from
  /// Hessian-vector products.
  [[nodiscard]] Matrix hessian(const Vector& x) const;

 private:
  SmoothFunction(Kind kind, Index dimension, double m, double L);

  Kind kind_;
  Index dimension_ = 0;
  double m_ = 0.0;
  double L_ = 0.0;
  InnerProxOptions inner_prox_{};
};

// ---------------------------------------------------------------------------
// Nonsmooth part g
// ---------------------------------------------------------------------------

/// g(x) = lambda ||x||_1
struct L1Norm {
  double lambda = 1.0;
};

/// Indicator of {x : lower <= x <= upper}.
struct BoxIndicator {
  Vector lower;
  Vector upper;
};

struct GenericProx {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector& v, double mu)> prox;
};

class NonsmoothFunction {
 public:
  using Kind = std::variant<L1Norm, BoxIndicator, GenericProx>;

  static NonsmoothFunction l1(double lambda);
  static NonsmoothFunction box(Vector lower, Vector upper);
  static NonsmoothFunction generic(GenericProx oracle);
  /// g == 0; prox is the identity.
  static NonsmoothFunction zero();

  [[nodiscard]] const Kind& kind() const noexcept { return kind_; }
  /// Dimension constraint imposed by the data, if any (only boxes carry one).
  [[nodiscard]] std::optional<Index> dimension() const;

  /// +infinity outside the domain of an indicator.
  [[nodiscard]] double value(const Vector& x) const;
  [[nodiscard]] Vector prox(const Vector& v, double mu) const;

 private:
  explicit NonsmoothFunction(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

// ---------------------------------------------------------------------------
// F = f + g
// ---------------------------------------------------------------------------

class CompositeProblem {
 public:
  CompositeProblem(SmoothFunction f, NonsmoothFunction g);

  [[nodiscard]] const SmoothFunction& f() const noexcept { return f_; }
  [[nodiscard]] const NonsmoothFunction& g() const noexcept { return g_; }
  [[nodiscard]] Index dimension() const noexcept { return f_.dimension(); }
  [[nodiscard]] double m() const noexcept { return f_.m(); }
  [[nodiscard]] double L() const noexcept { return f_.L(); }

  [[nodiscard]] double objective(const Vector& x) const { return f_.value(x) + g_.value(x); }

 private:
  SmoothFunction f_;
  NonsmoothFunction g_;
};

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

/// argmin_z g(z) + ||z - v||^2 / (2 mu). Throws InvalidInput on non-finite v,
/// ParameterDomainError on mu <= 0.
[[nodiscard]] Vector prox_g(const NonsmoothFunction& g, const Vector& v, double mu);

struct MoreauEval {
  double value = 0.0;
  Vector gradient;
  Vector prox_point;
};

/// Moreau envelope M_{mu g}(v) and its gradient (v - prox)/mu.
[[nodiscard]] MoreauEval moreau(const NonsmoothFunction& g, const Vector& v, double mu);

[[nodiscard]] Vector grad_f(const SmoothFunction& f, const Vector& x);

/// Reusable prox_{mu f}. For quadratics the factorization of (I + mu Q) is
/// computed once; otherwise every call runs the inner Newton solve.
class SmoothProx {
 public:
  SmoothProx(const SmoothFunction& f, double mu);

  [[nodiscard]] double mu() const noexcept { return mu_; }
  [[nodiscard]] Vector operator()(const Vector& v) const;
  /// Applies the Jacobian of prox_{mu f} at z, (I + mu Hess f(x))^{-1} w with
  /// x = prox_{mu f}(z) supplied by the caller.
  [[nodiscard]] Vector apply_jacobian(const Vector& prox_point, const Vector& w) const;

 private:
  std::optional<SmoothFunction> f_;  // kept for the Newton path only
  double mu_;
  std::optional<Eigen::LLT<Matrix>> factor_;
  Vector shift_;  // mu q for quadratics
};

/// One-shot prox_{mu f}(v); see SmoothProx for repeated use.
[[nodiscard]] Vector prox_f(const SmoothFunction& f, const Vector& v, double mu);

/// Throws InvalidInput when any entry is NaN or infinite.
void require_finite(const Vector& v, const char* what);

}  // namespace accsplit
