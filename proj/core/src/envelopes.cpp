#include "accsplit/envelopes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "accsplit/errors.hpp"

namespace accsplit {

void require_envelope_mu(double mu, double L) {
  if (!(mu > 0.0) || !(mu * L < 1.0) || !std::isfinite(mu)) {
    throw ParameterDomainError("mu must lie in (0, 1/L); got mu = " + std::to_string(mu) +
                               ", L = " + std::to_string(L));
  }
}

namespace {

struct FbParts {
  double f_value;
  Vector grad;
  Vector prox_point;
  Vector gen_grad;
};

FbParts fb_parts(const CompositeProblem& problem, const Vector& x, double mu) {
  require_envelope_mu(mu, problem.L());
  require_finite(x, "envelope point");
  if (x.size() != problem.dimension()) {
    throw InvalidInput("envelope point has wrong dimension");
  }
  FbParts out;
  out.f_value = problem.f().value(x);
  out.grad = problem.f().gradient(x);
  out.prox_point = problem.g().prox(x - mu * out.grad, mu);
  out.gen_grad = (x - out.prox_point) / mu;
  return out;
}

}  // namespace

Vector generalized_gradient(const CompositeProblem& problem, const Vector& x, double mu) {
  return fb_parts(problem, x, mu).gen_grad;
}

EnvelopeEval fb_envelope(const CompositeProblem& problem, const Vector& x, double mu) {
  if (!problem.f().has_hessian()) {
    throw UnsupportedOperation("FB envelope gradient needs a Hessian oracle");
  }
  FbParts parts = fb_parts(problem, x, mu);
  const Vector shifted = x - mu * parts.grad;
  const double g_at_p = problem.g().value(parts.prox_point);

  EnvelopeEval out;
  // M_{mu g}(x - mu grad f) evaluated from the prox point already in hand.
  const double moreau_value = g_at_p + (parts.prox_point - shifted).squaredNorm() / (2.0 * mu);
  out.value = parts.f_value + moreau_value - 0.5 * mu * parts.grad.squaredNorm();
  out.value_alt = parts.f_value + g_at_p - mu * parts.grad.dot(parts.gen_grad) +
                  0.5 * mu * parts.gen_grad.squaredNorm();

  const double scale = 1.0 + std::abs(parts.f_value) + std::abs(g_at_p) +
                       mu * std::abs(parts.grad.dot(parts.gen_grad)) +
                       0.5 * mu * (parts.gen_grad.squaredNorm() + parts.grad.squaredNorm());
  if (!(std::abs(out.value - out.value_alt) <= 1e-10 * scale)) {
    throw ConsistencyError("FB envelope value formulas disagree");
  }

  out.gradient = parts.gen_grad - mu * problem.f().hessian_vector(x, parts.gen_grad);
  out.gen_grad = std::move(parts.gen_grad);
  out.prox_point = std::move(parts.prox_point);
  out.primal_point = x;
  return out;
}

EnvelopeEval dr_envelope(const CompositeProblem& problem, const SmoothProx& prox, const Vector& z) {
  const Vector x = prox(z);
  EnvelopeEval out = fb_envelope(problem, x, prox.mu());
  out.gradient = 2.0 * prox.apply_jacobian(x, out.gen_grad) - out.gen_grad;
  return out;
}

EnvelopeEval dr_envelope(const CompositeProblem& problem, const Vector& z, double mu) {
  require_envelope_mu(mu, problem.L());
  const SmoothProx prox(problem.f(), mu);
  return dr_envelope(problem, prox, z);
}

EnvelopeConstants envelope_constants(double m, double L, double mu, EnvelopeKind kind) {
  if (!(m >= 0.0) || !(L >= m) || !(L > 0.0)) {
    throw ParameterDomainError("envelope constants need 0 <= m <= L, L > 0");
  }
  require_envelope_mu(mu, L);
  EnvelopeConstants out;
  out.kind = kind;
  const double a = 1.0 - mu * m;
  const double b = 1.0 - mu * L;
  if (kind == EnvelopeKind::FB) {
    out.L_env = 2.0 / mu - 2.0 * m;
    out.m_env = std::min(a * m, b * L);
  } else {
    const double cm = 1.0 + mu * m;
    const double cL = 1.0 + mu * L;
    out.L_env = a / (mu * cm * cm);
    out.m_env = std::min(a * m / (cm * cm), b * L / (cL * cL));
  }
  out.kappa_env = out.m_env > 0.0 ? out.L_env / out.m_env : std::numeric_limits<double>::infinity();
  return out;
}

Matrix envelope_weight(const QuadraticSmooth& f, double mu, EnvelopeKind kind) {
  const Index n = f.Q.rows();
  const Matrix I = Matrix::Identity(n, n);
  Matrix H = I - mu * f.Q;
  if (kind == EnvelopeKind::DR) {
    const Matrix plus = I + mu * f.Q;
    // (I - mu Q)(I + mu Q)^{-1}; the factors commute so the product is symmetric.
    H = plus.llt().solve(H);
    H = 0.5 * (H + H.transpose());
  }
  return H;
}

const char* to_string(EnvelopeKind kind) { return kind == EnvelopeKind::FB ? "fb" : "dr"; }

}  // namespace accsplit
