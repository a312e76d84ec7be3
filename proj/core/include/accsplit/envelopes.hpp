#pragma once

#include <limits>

#include "accsplit/problems.hpp"

namespace accsplit {

enum class EnvelopeKind { FB, DR };

/// Smoothness / strong-convexity constants of the FB or DR envelope of a
/// problem whose smooth part is convex quadratic.
struct EnvelopeConstants {
  EnvelopeKind kind = EnvelopeKind::FB;
  double L_env = 0.0;
  double m_env = 0.0;
  /// L_env / m_env, +inf when m_env == 0.
  double kappa_env = std::numeric_limits<double>::infinity();
};

struct EnvelopeEval {
  double value = 0.0;
  Vector gradient;
  /// G_mu at x (FB) or at prox_{mu f}(z) (DR).
  Vector gen_grad;
  /// p_mu(x) = prox_{mu g}(x - mu grad f(x)) at the evaluation point x (FB),
  /// or at x = prox_{mu f}(z) (DR).
  Vector prox_point;
  /// For DR, x = prox_{mu f}(z); for FB, the input point itself.
  Vector primal_point;
  /// FB value recomputed as f(x) + g(p) - mu <grad f, G> + mu/2 ||G||^2.
  double value_alt = 0.0;
};

/// Throws ParameterDomainError unless 0 < mu < 1/L.
void require_envelope_mu(double mu, double L);

/// G_mu(x) = (x - prox_{mu g}(x - mu grad f(x))) / mu.
[[nodiscard]] Vector generalized_gradient(const CompositeProblem& problem, const Vector& x, double mu);

/// FB envelope value, gradient (I - mu Hess f(x)) G_mu(x), and the
/// alternative value formula. Throws ConsistencyError if the two values
/// disagree beyond 1e-10 relative.
[[nodiscard]] EnvelopeEval fb_envelope(const CompositeProblem& problem, const Vector& x, double mu);

/// DR envelope D_mu(z) = F_mu(prox_{mu f}(z)) with gradient
/// (2 J - I) G_mu(prox_{mu f}(z)), J the Jacobian of prox_{mu f}.
[[nodiscard]] EnvelopeEval dr_envelope(const CompositeProblem& problem, const Vector& z, double mu);
/// Same, reusing a prebuilt prox_{mu f}.
[[nodiscard]] EnvelopeEval dr_envelope(const CompositeProblem& problem, const SmoothProx& prox,
                                       const Vector& z);

[[nodiscard]] EnvelopeConstants envelope_constants(double m, double L, double mu, EnvelopeKind kind);

/// Weight matrix H with grad E = H Delta for a quadratic smooth part:
/// I - mu Q (FB) or (I - mu Q)(I + mu Q)^{-1} (DR).
[[nodiscard]] Matrix envelope_weight(const QuadraticSmooth& f, double mu, EnvelopeKind kind);

[[nodiscard]] const char* to_string(EnvelopeKind kind);

}  // namespace accsplit
