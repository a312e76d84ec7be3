#pragma once

#include <cstddef>
#include <functional>

#include "accsplit/problems.hpp"

namespace accsplit {

enum class Scheme { DormandPrince45, ClassicalRK4 };

struct IntegratorOptions {
  Scheme scheme = Scheme::DormandPrince45;
  double rtol = 1e-9;
  double atol = 1e-9;
  /// 0 picks a starting step automatically.
  double initial_step = 0.0;
  double max_step = 0.0;  // 0: unbounded
  /// Fixed-step RK4 takes this many steps per sampling interval.
  int rk4_substeps = 10;
  std::size_t max_steps = 50'000'000;
};

struct IntegratorStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t evaluations = 0;
  /// Sum over accepted steps of the Euclidean norm of the embedded error
  /// estimate (zero for RK4).
  double accumulated_error = 0.0;
  /// Largest single-step error estimate.
  double max_local_error = 0.0;
  double final_time = 0.0;
};

using OdeField = std::function<Vector(double t, const Vector& y)>;
/// Called at every sample time in order; return false to stop integrating.
using SampleCallback = std::function<bool(double t, const Vector& y)>;

/// Thrown when a step would underflow or the field turns non-finite. The
/// samples already delivered to the callback remain valid.
class StepUnderflow : public std::runtime_error {
 public:
  StepUnderflow(const std::string& what, double t) : std::runtime_error(what), time_(t) {}
  [[nodiscard]] double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Integrates y' = field(t, y) from (t0, y0) to t_end, emitting dense-output
/// samples at t0, t0 + dt, t0 + 2 dt, ... and t_end.
IntegratorStats integrate_ode(const OdeField& field, double t0, const Vector& y0, double t_end,
                              double sample_dt, const IntegratorOptions& options,
                              const SampleCallback& on_sample);

}  // namespace accsplit
