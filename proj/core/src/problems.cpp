#include "accsplit/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "accsplit/errors.hpp"

namespace accsplit {
namespace {

double softplus(double s) {
  // log(1 + e^s) without overflow
  return s > 0.0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s));
}

double sigmoid(double s) {
  if (s >= 0.0) {
    return 1.0 / (1.0 + std::exp(-s));
  }
  const double e = std::exp(s);
  return e / (1.0 + e);
}

void require_dimension(const Vector& x, Index n, const char* what) {
  if (x.size() != n) {
    throw InvalidInput(std::string(what) + ": dimension " + std::to_string(x.size()) +
                       " does not match " + std::to_string(n));
  }
}

void require_positive_mu(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw ParameterDomainError("penalty parameter mu must be positive and finite");
  }
}

}  // namespace

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) {
    throw InvalidInput(std::string(what) + ": non-finite entries");
  }
}

// ---------------------------------------------------------------------------
// SmoothFunction
// ---------------------------------------------------------------------------

SmoothFunction::SmoothFunction(Kind kind, Index dimension, double m, double L)
    : kind_(std::move(kind)), dimension_(dimension), m_(m), L_(L) {
  if (dimension_ <= 0) {
    throw InvalidInput("smooth function: dimension must be positive");
  }
  if (!(m_ >= 0.0) || !(L_ >= m_) || !std::isfinite(L_)) {
    throw InvalidInput("smooth function: constants must satisfy 0 <= m <= L < inf");
  }
}

SmoothFunction SmoothFunction::quadratic(Matrix Q, Vector q) {
  if (Q.rows() != Q.cols() || Q.rows() != q.size()) {
    throw InvalidInput("quadratic: Q must be n x n and q of length n");
  }
  if (!Q.allFinite() || !q.allFinite()) {
    throw InvalidInput("quadratic: non-finite data");
  }
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(Q, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  const double tol = 1e-12 * std::max(1.0, std::abs(hi));
  if (lo < -tol) {
    throw InvalidInput("quadratic: Q is not positive semidefinite");
  }
  const double m = std::max(0.0, lo);
  const double L = std::max(m, hi);
  return quadratic(std::move(Q), std::move(q), m, L);
}

SmoothFunction SmoothFunction::quadratic(Matrix Q, Vector q, double m, double L) {
  if (Q.rows() != Q.cols() || Q.rows() != q.size()) {
    throw InvalidInput("quadratic: Q must be n x n and q of length n");
  }
  const Index n = q.size();
  return SmoothFunction(QuadraticSmooth{std::move(Q), std::move(q)}, n, m, L);
}

SmoothFunction SmoothFunction::logistic_ridge(Matrix A, Vector y, double ridge) {
  if (A.rows() != y.size()) {
    throw InvalidInput("logistic: A must have one row per label");
  }
  if (!(ridge >= 0.0)) {
    throw InvalidInput("logistic: ridge must be nonnegative");
  }
  for (Index i = 0; i < y.size(); ++i) {
    if (y[i] != 0.0 && y[i] != 1.0) {
      throw InvalidInput("logistic: labels must be 0 or 1");
    }
  }
  // lambda_max(A'A) from the smaller Gram matrix
  const Matrix gram = A.rows() <= A.cols() ? Matrix(A * A.transpose()) : Matrix(A.transpose() * A);
  double top = 0.0;
  if (gram.size() > 0) {
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
    top = std::max(0.0, eig.eigenvalues().maxCoeff());
  }
  const Index n = A.cols();
  return SmoothFunction(LogisticRidgeSmooth{std::move(A), std::move(y), ridge}, n, ridge,
                        ridge + 0.25 * top);
}

SmoothFunction SmoothFunction::generic(GenericSmooth oracle, Index dimension, double m, double L) {
  if (!oracle.value || !oracle.gradient) {
    throw InvalidInput("generic smooth function needs value and gradient oracles");
  }
  return SmoothFunction(std::move(oracle), dimension, m, L);
}

SmoothFunction SmoothFunction::with_inner_prox(InnerProxOptions options) const {
  if (!(options.tolerance > 0.0) || options.max_iterations <= 0) {
    throw InvalidInput("inner prox: tolerance and iteration budget must be positive");
  }
  SmoothFunction copy = *this;
  copy.inner_prox_ = options;
  return copy;
}

bool SmoothFunction::has_hessian() const {
  if (const auto* gen = std::get_if<GenericSmooth>(&kind_)) {
    return static_cast<bool>(gen->hessian_vector);
  }
  return true;
}

bool SmoothFunction::has_prox() const {
  if (as_quadratic() != nullptr) {
    return true;
  }
  return inner_prox_.enabled && has_hessian();
}

double SmoothFunction::value(const Vector& x) const {
  require_dimension(x, dimension_, "f value");
  struct Visitor {
    const Vector& x;
    double operator()(const QuadraticSmooth& f) const { return 0.5 * x.dot(f.Q * x) + f.q.dot(x); }
    double operator()(const LogisticRidgeSmooth& f) const {
      const Vector s = f.A * x;
      double total = 0.0;
      for (Index i = 0; i < s.size(); ++i) {
        total += softplus(s[i]) - f.y[i] * s[i];
      }
      return total + 0.5 * f.ridge * x.squaredNorm();
    }
    double operator()(const GenericSmooth& f) const { return f.value(x); }
  };
  return std::visit(Visitor{x}, kind_);
}

Vector SmoothFunction::gradient(const Vector& x) const {
  require_dimension(x, dimension_, "f gradient");
  struct Visitor {
    const Vector& x;
    Vector operator()(const QuadraticSmooth& f) const { return f.Q * x + f.q; }
    Vector operator()(const LogisticRidgeSmooth& f) const {
      Vector r = f.A * x;
      for (Index i = 0; i < r.size(); ++i) {
        r[i] = sigmoid(r[i]) - f.y[i];
      }
      return f.A.transpose() * r + f.ridge * x;
    }
    Vector operator()(const GenericSmooth& f) const { return f.gradient(x); }
  };
  return std::visit(Visitor{x}, kind_);
}

Vector SmoothFunction::hessian_vector(const Vector& x, const Vector& v) const {
  require_dimension(x, dimension_, "f hessian point");
  require_dimension(v, dimension_, "f hessian direction");
  struct Visitor {
    const Vector& x;
    const Vector& v;
    Vector operator()(const QuadraticSmooth& f) const { return f.Q * v; }
    Vector operator()(const LogisticRidgeSmooth& f) const {
      const Vector s = f.A * x;
      Vector av = f.A * v;
      for (Index i = 0; i < s.size(); ++i) {
        const double p = sigmoid(s[i]);
        av[i] *= p * (1.0 - p);
      }
      return f.A.transpose() * av + f.ridge * v;
    }
    Vector operator()(const GenericSmooth& f) const {
      if (!f.hessian_vector) {
        throw UnsupportedOperation("generic smooth function has no Hessian-vector oracle");
      }
      return f.hessian_vector(x, v);
    }
  };
  return std::visit(Visitor{x, v}, kind_);
}

Matrix SmoothFunction::hessian(const Vector& x) const {
  require_dimension(x, dimension_, "f hessian point");
  if (const auto* quad = as_quadratic()) {
    return quad->Q;
  }
  if (const auto* logit = as_logistic()) {
    const Vector s = logit->A * x;
    Vector w(s.size());
    for (Index i = 0; i < s.size(); ++i) {
      const double p = sigmoid(s[i]);
      w[i] = p * (1.0 - p);
    }
    Matrix H = logit->A.transpose() * w.asDiagonal() * logit->A;
    H.diagonal().array() += logit->ridge;
    return H;
  }
  Matrix H(dimension_, dimension_);
  for (Index j = 0; j < dimension_; ++j) {
    H.col(j) = hessian_vector(x, Vector::Unit(dimension_, j));
  }
  return 0.5 * (H + H.transpose());
}

// ---------------------------------------------------------------------------
// NonsmoothFunction
// ---------------------------------------------------------------------------

NonsmoothFunction NonsmoothFunction::l1(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InvalidInput("l1: weight must be positive");
  }
  return NonsmoothFunction(L1Norm{lambda});
}

NonsmoothFunction NonsmoothFunction::box(Vector lower, Vector upper) {
  if (lower.size() != upper.size()) {
    throw InvalidInput("box: bounds differ in length");
  }
  if ((lower.array() > upper.array()).any() || lower.array().isNaN().any() ||
      upper.array().isNaN().any()) {
    throw InvalidInput("box: need lower <= upper elementwise");
  }
  return NonsmoothFunction(BoxIndicator{std::move(lower), std::move(upper)});
}

NonsmoothFunction NonsmoothFunction::generic(GenericProx oracle) {
  if (!oracle.value || !oracle.prox) {
    throw InvalidInput("generic nonsmooth function needs value and prox oracles");
  }
  return NonsmoothFunction(std::move(oracle));
}

NonsmoothFunction NonsmoothFunction::zero() {
  return generic(GenericProx{[](const Vector&) { return 0.0; },
                             [](const Vector& v, double) { return Vector(v); }});
}

std::optional<Index> NonsmoothFunction::dimension() const {
  if (const auto* b = std::get_if<BoxIndicator>(&kind_)) {
    return b->lower.size();
  }
  return std::nullopt;
}

double NonsmoothFunction::value(const Vector& x) const {
  struct Visitor {
    const Vector& x;
    double operator()(const L1Norm& g) const { return g.lambda * x.lpNorm<1>(); }
    double operator()(const BoxIndicator& g) const {
      require_dimension(x, g.lower.size(), "box value");
      const bool inside = (x.array() >= g.lower.array()).all() && (x.array() <= g.upper.array()).all();
      return inside ? 0.0 : std::numeric_limits<double>::infinity();
    }
    double operator()(const GenericProx& g) const { return g.value(x); }
  };
  return std::visit(Visitor{x}, kind_);
}

Vector NonsmoothFunction::prox(const Vector& v, double mu) const {
  require_positive_mu(mu);
  require_finite(v, "prox_g");
  struct Visitor {
    const Vector& v;
    double mu;
    Vector operator()(const L1Norm& g) const {
      const double thr = mu * g.lambda;
      return v.unaryExpr([thr](double s) {
        if (s > thr) return s - thr;
        if (s < -thr) return s + thr;
        return 0.0;
      });
    }
    Vector operator()(const BoxIndicator& g) const {
      require_dimension(v, g.lower.size(), "box prox");
      return v.cwiseMax(g.lower).cwiseMin(g.upper);
    }
    Vector operator()(const GenericProx& g) const { return g.prox(v, mu); }
  };
  return std::visit(Visitor{v, mu}, kind_);
}

// ---------------------------------------------------------------------------
// CompositeProblem
// ---------------------------------------------------------------------------

CompositeProblem::CompositeProblem(SmoothFunction f, NonsmoothFunction g)
    : f_(std::move(f)), g_(std::move(g)) {
  if (const auto gn = g_.dimension(); gn && *gn != f_.dimension()) {
    throw InvalidInput("composite problem: f and g dimensions disagree");
  }
}

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

Vector prox_g(const NonsmoothFunction& g, const Vector& v, double mu) { return g.prox(v, mu); }

MoreauEval moreau(const NonsmoothFunction& g, const Vector& v, double mu) {
  MoreauEval out;
  out.prox_point = g.prox(v, mu);
  out.value = g.value(out.prox_point) + (out.prox_point - v).squaredNorm() / (2.0 * mu);
  out.gradient = (v - out.prox_point) / mu;
  return out;
}

Vector grad_f(const SmoothFunction& f, const Vector& x) {
  require_finite(x, "grad_f");
  return f.gradient(x);
}

SmoothProx::SmoothProx(const SmoothFunction& f, double mu) : mu_(mu) {
  require_positive_mu(mu);
  if (const auto* quad = f.as_quadratic()) {
    Matrix M = mu * quad->Q;
    M.diagonal().array() += 1.0;
    factor_.emplace(M);
    if (factor_->info() != Eigen::Success) {
      throw InvalidInput("prox_f: I + mu Q is not positive definite");
    }
    shift_ = mu * quad->q;
    return;
  }
  if (!f.inner_prox().enabled) {
    throw UnsupportedOperation(
        "prox_f is only closed-form for quadratic f; enable the inner Newton solver");
  }
  if (!f.has_hessian()) {
    throw UnsupportedOperation("prox_f: inner Newton solver needs a Hessian oracle");
  }
  f_.emplace(f);
}

Vector SmoothProx::operator()(const Vector& v) const {
  require_finite(v, "prox_f");
  if (factor_) {
    if (v.size() != shift_.size()) {
      throw InvalidInput("prox_f: dimension mismatch");
    }
    return factor_->solve(v - shift_);
  }

  // Damped Newton on phi(z) = f(z) + ||z - v||^2 / (2 mu).
  const SmoothFunction& f = *f_;
  const auto& opts = f.inner_prox();
  const double target = opts.tolerance * (1.0 + v.norm());
  auto phi = [&](const Vector& z) { return f.value(z) + (z - v).squaredNorm() / (2.0 * mu_); };

  Vector z = v;
  double phi_z = phi(z);
  for (int it = 0; it < opts.max_iterations; ++it) {
    const Vector r = f.gradient(z) + (z - v) / mu_;
    if (r.norm() <= target) {
      return z;
    }
    Matrix H = f.hessian(z);
    H.diagonal().array() += 1.0 / mu_;
    const Vector step = -H.llt().solve(r);
    const double slope = r.dot(step);
    double t = 1.0;
    Vector trial = z + step;
    double phi_trial = phi(trial);
    const bool contracted = (f.gradient(trial) + (trial - v) / mu_).norm() <= 0.5 * r.norm();
    while (!contracted && phi_trial > phi_z + 1e-4 * t * slope && t > 1e-12) {
      t *= 0.5;
      trial = z + t * step;
      phi_trial = phi(trial);
    }
    z = std::move(trial);
    phi_z = phi_trial;
  }
  const Vector r = f.gradient(z) + (z - v) / mu_;
  if (r.norm() > target) {
    throw std::runtime_error("prox_f: inner Newton solve did not reach tolerance");
  }
  return z;
}

Vector SmoothProx::apply_jacobian(const Vector& prox_point, const Vector& w) const {
  if (factor_) {
    return factor_->solve(w);
  }
  Matrix M = mu_ * f_->hessian(prox_point);
  M.diagonal().array() += 1.0;
  return M.llt().solve(w);
}

Vector prox_f(const SmoothFunction& f, const Vector& v, double mu) { return SmoothProx(f, mu)(v); }

}  // namespace accsplit
