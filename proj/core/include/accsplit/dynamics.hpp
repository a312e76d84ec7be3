#pragma once

#include <optional>

#include "accsplit/envelopes.hpp"
#include "accsplit/problems.hpp"
#include "accsplit/schedule.hpp"

namespace accsplit {

/// FbFlow:  x'  = -alpha G(x)
/// DrFlow:  z'  = -alpha G(prox_{mu f}(z))
/// AccFb:   x'' + gamma x' + alpha G(x + beta x') = 0
/// AccDr:   z'' + gamma z' + alpha G(prox_{mu f}(z + beta z')) = 0,  x = prox_{mu f}(z)
enum class DynamicsKind { FbFlow, DrFlow, AccFb, AccDr };

[[nodiscard]] constexpr bool is_accelerated(DynamicsKind k) {
  return k == DynamicsKind::AccFb || k == DynamicsKind::AccDr;
}
[[nodiscard]] constexpr bool is_douglas_rachford(DynamicsKind k) {
  return k == DynamicsKind::DrFlow || k == DynamicsKind::AccDr;
}
[[nodiscard]] constexpr EnvelopeKind envelope_of(DynamicsKind k) {
  return is_douglas_rachford(k) ? EnvelopeKind::DR : EnvelopeKind::FB;
}
[[nodiscard]] const char* to_string(DynamicsKind kind);
[[nodiscard]] DynamicsKind dynamics_kind_from_string(const std::string& name);

struct DynamicsSpec {
  DynamicsKind kind = DynamicsKind::AccFb;
  CompositeProblem problem;
  double mu = 0.0;
  ParameterSchedule schedule;

  /// Throws ParameterDomainError / UnsupportedOperation when mu is outside
  /// (0, 1/L), a DR kind lacks prox_{mu f}, or an accelerated FB run on a
  /// non-quadratic f with the constant schedule violates
  /// mu <= sqrt(gamma beta)/(2L).
  void validate() const;
};

/// Prepared right-hand side in first-order form psi = (position, velocity);
/// flows carry only the position block.
class VectorField {
 public:
  explicit VectorField(DynamicsSpec spec);

  [[nodiscard]] const DynamicsSpec& spec() const noexcept { return spec_; }
  [[nodiscard]] Index dimension() const noexcept { return spec_.problem.dimension(); }
  [[nodiscard]] Index state_dimension() const noexcept {
    return is_accelerated(spec_.kind) ? 2 * dimension() : dimension();
  }
  /// Derivative of psi at time t. Returns a NaN vector if psi is non-finite.
  [[nodiscard]] Vector operator()(double t, const Vector& psi) const;
  /// Output map: position for FB kinds, prox_{mu f}(position) for DR kinds.
  [[nodiscard]] Vector primal(const Vector& position) const;
  /// The prebuilt prox_{mu f}; present for DR kinds only.
  [[nodiscard]] const SmoothProx* smooth_prox() const noexcept {
    return smooth_prox_ ? &*smooth_prox_ : nullptr;
  }

 private:
  [[nodiscard]] Vector delta(const Vector& y) const;

  DynamicsSpec spec_;
  std::optional<SmoothProx> smooth_prox_;
};

/// One-shot evaluation; builds a VectorField each call.
[[nodiscard]] Vector vector_field(const DynamicsSpec& spec, double t, const Vector& psi);

/// x - alpha_bar G_mu(x); alpha_bar = mu gives the proximal gradient step.
[[nodiscard]] Vector discrete_fb_step(const CompositeProblem& problem, const Vector& x,
                                      double alpha_bar, double mu);

/// z - prox_{mu f}(z) + prox_{mu g}(2 prox_{mu f}(z) - z).
[[nodiscard]] Vector discrete_dr_step(const CompositeProblem& problem, const Vector& z, double mu);
[[nodiscard]] Vector discrete_dr_step(const CompositeProblem& problem, const SmoothProx& prox,
                                      const Vector& z);

}  // namespace accsplit
