#pragma once

namespace accsplit {

enum class ScheduleMode { ConvexTimeVarying, StronglyConvexConstant };

/// Damping gamma, extrapolation beta and Lyapunov rate theta at one time.
struct ScheduleValues {
  double gamma = 0.0;
  double beta = 0.0;
  double theta = 0.0;
};

/// gamma = 3/(t+3), beta = 1 - gamma, theta = 2/(t+3). Throws
/// ParameterDomainError for t < 0.
[[nodiscard]] ScheduleValues schedule_convex(double t);

/// Algorithmic parameters of the accelerated dynamics. Flows only read
/// alpha().
class ParameterSchedule {
 public:
  /// Time-varying schedule for convex problems.
  static ParameterSchedule convex(double alpha);
  /// Constant schedule for strongly convex problems: with w = sqrt(alpha m),
  /// gamma = 2w/(w+1), beta = 1 - gamma, theta = (gamma + w^2 beta)/2 and
  /// rho = w - w^2/2 (equal to theta). Requires alpha * m_eff in (0, 1].
  static ParameterSchedule strongly_convex(double alpha, double m_eff);

  [[nodiscard]] ScheduleMode mode() const noexcept { return mode_; }
  [[nodiscard]] double alpha() const noexcept { return alpha_; }
  /// Strong-convexity constant the constant schedule was tuned for (0 for
  /// the convex schedule).
  [[nodiscard]] double m_eff() const noexcept { return m_eff_; }
  /// Guaranteed exponential rate; 0 for the convex schedule.
  [[nodiscard]] double rho() const noexcept { return rho_; }

  [[nodiscard]] ScheduleValues at(double t) const;
  [[nodiscard]] double gamma(double t) const { return at(t).gamma; }
  [[nodiscard]] double beta(double t) const { return at(t).beta; }
  [[nodiscard]] double theta(double t) const { return at(t).theta; }
  [[nodiscard]] double theta_dot(double t) const;
  /// Integral of theta over [t0, t1] (closed form).
  [[nodiscard]] double theta_integral(double t0, double t1) const;

 private:
  ParameterSchedule() = default;

  ScheduleMode mode_ = ScheduleMode::ConvexTimeVarying;
  double alpha_ = 1.0;
  double m_eff_ = 0.0;
  ScheduleValues constant_{};
  double rho_ = 0.0;
};

/// Same as ParameterSchedule::strongly_convex.
[[nodiscard]] ParameterSchedule schedule_strongly_convex(double alpha, double m_eff);

}  // namespace accsplit
