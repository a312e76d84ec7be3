#pragma once

#include <optional>

#include "accsplit/certificates.hpp"
#include "accsplit/dynamics.hpp"
#include "accsplit/trajectory.hpp"

namespace accsplit {

enum class LyapunovCase {
  /// alpha E(psi1) + 1/2 ||theta(t) psi1 + psi2||_H^2, time-varying theta.
  QuadraticConvex,
  /// Same with constant theta = rho.
  QuadraticStronglyConvex,
  /// alpha F_mu(psi1 + beta psi2) + 1/2 ||theta psi1 + psi2||^2.
  GeneralStronglyConvex,
};

[[nodiscard]] const char* to_string(LyapunovCase c);

struct LyapunovSpec {
  LyapunovCase kind = LyapunovCase::QuadraticConvex;
  EnvelopeKind envelope = EnvelopeKind::FB;
  double alpha = 1.0;
  double mu = 0.0;
  /// Source of theta(t) and beta(t).
  ParameterSchedule schedule = ParameterSchedule::convex(1.0);
  /// Weight matrix for the quadratic cases; unused for the general case.
  Matrix H;
  /// Minimizer of the envelope in position coordinates (x* for FB, z* for
  /// DR) and the optimal value; required when `shift` is set.
  std::optional<Vector> position_star;
  std::optional<double> value_star;
  /// Measure psi1 relative to position_star and E relative to value_star.
  bool shift = true;
};

/// Picks the case from the problem and schedule, builds H, and fills in the
/// shift from the reference when one is given.
[[nodiscard]] LyapunovSpec lyapunov_spec_for(const DynamicsSpec& dynamics,
                                             const std::optional<Reference>& reference);

/// A LyapunovSpec bound to the problem it is evaluated on.
class LyapunovFunction {
 public:
  LyapunovFunction(LyapunovSpec spec, CompositeProblem problem);

  [[nodiscard]] const LyapunovSpec& spec() const noexcept { return spec_; }
  [[nodiscard]] double theta(double t) const { return spec_.schedule.theta(t); }
  /// Throws NeedsReference if a shift is requested without a reference.
  [[nodiscard]] double operator()(double t, const Vector& psi) const;
  /// G(y) for FB, G(prox_{mu f}(y)) for DR.
  [[nodiscard]] Vector delta_at(const Vector& y) const;

 private:
  [[nodiscard]] double envelope_value(const Vector& position) const;

  LyapunovSpec spec_;
  CompositeProblem problem_;
  std::optional<SmoothProx> prox_;
};

[[nodiscard]] double lyapunov_value(const LyapunovFunction& V, double t, const Vector& psi);

/// Central-difference check of V' + theta V <= 1e-4 (1 + V) at every interior
/// sample. Uses the trajectory's recorded Lyapunov values when present.
[[nodiscard]] CertificateReport check_lyapunov_decay(const Trajectory& traj, const LyapunovFunction& V);

/// V(t) <= V(t0) exp(-int theta) within 5% relative (plus a floating-point
/// floor of 1e-13 (1 + V(t0))).
[[nodiscard]] CertificateReport check_gronwall(const Trajectory& traj, const LyapunovFunction& V);

/// <u - v, C2 psi>_H with u = Delta(psi1 + beta psi2), v = Delta(psi1),
/// C2 psi = beta psi2. Nonnegative by monotonicity of the envelope gradient.
[[nodiscard]] double monotonicity_product(const LyapunovFunction& V, double t, const Vector& psi);

// ---------------------------------------------------------------------------
// Certificate matrices in the (psi, psi) block (2n x 2n)
// ---------------------------------------------------------------------------

/// A' P + P A + theta P + dP/dt with P = R' H R, R = [theta I, I],
/// A = [[0, I], [0, -gamma I]], at time t of the convex schedule.
[[nodiscard]] Matrix certificate_pi_convex(const Matrix& H, const ParameterSchedule& schedule, double t);

/// Pi - Upsilon for constant parameters:
/// Pi = A'P + PA + theta P - alpha m theta (C'HC + C2'HC2),
/// Upsilon = 2 alpha m beta (1 - theta beta) [[0,0],[0,H]].
[[nodiscard]] Matrix certificate_pi_minus_upsilon(const Matrix& H, const ParameterSchedule& schedule,
                                                  double m_env);

}  // namespace accsplit
