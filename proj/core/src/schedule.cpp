#include "accsplit/schedule.hpp"

#include <cmath>

#include "accsplit/errors.hpp"

namespace accsplit {
namespace {

// theta(t) = 2/(t + r); r = 3 keeps beta(t) >= 0 from t = 0 on.
constexpr double kOffset = 3.0;

void require_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ParameterDomainError("alpha must be positive and finite");
  }
}

}  // namespace

ScheduleValues schedule_convex(double t) {
  if (!(t >= 0.0)) {
    throw ParameterDomainError("schedule time must be nonnegative");
  }
  ScheduleValues v;
  v.gamma = 3.0 / (t + kOffset);
  v.beta = 1.0 - v.gamma;
  v.theta = 2.0 / (t + kOffset);
  return v;
}

ParameterSchedule ParameterSchedule::convex(double alpha) {
  require_alpha(alpha);
  ParameterSchedule s;
  s.mode_ = ScheduleMode::ConvexTimeVarying;
  s.alpha_ = alpha;
  return s;
}

ParameterSchedule ParameterSchedule::strongly_convex(double alpha, double m_eff) {
  require_alpha(alpha);
  const double am = alpha * m_eff;
  if (!(am > 0.0) || !(am <= 1.0)) {
    throw ParameterDomainError("strongly convex schedule needs alpha * m in (0, 1]");
  }
  const double w = std::sqrt(am);
  ParameterSchedule s;
  s.mode_ = ScheduleMode::StronglyConvexConstant;
  s.alpha_ = alpha;
  s.m_eff_ = m_eff;
  s.constant_.gamma = 2.0 * w / (w + 1.0);
  s.constant_.beta = 1.0 - s.constant_.gamma;
  // zeroes the off-diagonal blocks of the certificate matrix
  s.constant_.theta = 0.5 * (s.constant_.gamma + am * s.constant_.beta);
  s.rho_ = w - 0.5 * am;
  if (std::abs(s.constant_.theta - s.rho_) > 1e-12 * (1.0 + s.rho_)) {
    throw ConsistencyError("strongly convex schedule: theta != rho");
  }
  return s;
}

ParameterSchedule schedule_strongly_convex(double alpha, double m_eff) {
  return ParameterSchedule::strongly_convex(alpha, m_eff);
}

ScheduleValues ParameterSchedule::at(double t) const {
  if (mode_ == ScheduleMode::ConvexTimeVarying) {
    return schedule_convex(t);
  }
  return constant_;
}

double ParameterSchedule::theta_dot(double t) const {
  if (mode_ == ScheduleMode::ConvexTimeVarying) {
    const double s = t + kOffset;
    return -2.0 / (s * s);
  }
  return 0.0;
}

double ParameterSchedule::theta_integral(double t0, double t1) const {
  if (mode_ == ScheduleMode::ConvexTimeVarying) {
    return 2.0 * std::log((t1 + kOffset) / (t0 + kOffset));
  }
  return constant_.theta * (t1 - t0);
}

}  // namespace accsplit
