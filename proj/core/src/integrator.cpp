#include "accsplit/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "accsplit/errors.hpp"

namespace accsplit {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
// fifth-order minus embedded fourth-order weights
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// continuous extension (Hairer, Norsett & Wanner)
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

double scaled_norm(const Vector& err, const Vector& y0, const Vector& y1, double atol, double rtol) {
  const Index n = err.size();
  if (n == 0) return 0.0;
  double sum = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / sc;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(n));
}

class SampleClock {
 public:
  SampleClock(double t0, double t_end, double dt) : t0_(t0), t_end_(t_end), dt_(dt) {}

  [[nodiscard]] bool done() const { return finished_; }
  [[nodiscard]] double next() const {
    const double t = t0_ + static_cast<double>(k_) * dt_;
    return t >= t_end_ - 1e-12 * dt_ ? t_end_ : t;
  }
  void advance() {
    if (next() == t_end_) {
      finished_ = true;
    }
    ++k_;
  }

 private:
  double t0_, t_end_, dt_;
  std::size_t k_ = 0;
  bool finished_ = false;
};

IntegratorStats run_rk4(const OdeField& field, double t0, const Vector& y0, double t_end,
                        double sample_dt, const IntegratorOptions& options,
                        const SampleCallback& on_sample) {
  IntegratorStats stats;
  SampleClock clock(t0, t_end, sample_dt);
  Vector y = y0;
  double t = t0;
  if (!on_sample(t, y)) {
    stats.final_time = t;
    return stats;
  }
  clock.advance();
  while (!clock.done()) {
    const double target = clock.next();
    const int sub = std::max(1, options.rk4_substeps);
    const double h = (target - t) / sub;
    for (int s = 0; s < sub; ++s) {
      const Vector k1 = field(t, y);
      const Vector k2 = field(t + 0.5 * h, y + 0.5 * h * k1);
      const Vector k3 = field(t + 0.5 * h, y + 0.5 * h * k2);
      const Vector k4 = field(t + h, y + h * k3);
      stats.evaluations += 4;
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t += h;
      ++stats.accepted;
      if (!y.allFinite()) {
        throw StepUnderflow("RK4 state became non-finite", t);
      }
    }
    t = target;
    stats.final_time = t;
    clock.advance();
    if (!on_sample(t, y)) {
      break;
    }
  }
  return stats;
}

}  // namespace

IntegratorStats integrate_ode(const OdeField& field, double t0, const Vector& y0, double t_end,
                              double sample_dt, const IntegratorOptions& options,
                              const SampleCallback& on_sample) {
  if (!(t_end > t0)) {
    throw ParameterDomainError("integration end time must exceed the start time");
  }
  if (!(sample_dt > 0.0)) {
    throw ParameterDomainError("sample spacing must be positive");
  }
  if (!(options.rtol >= 1e-14) || !(options.atol > 0.0)) {
    throw ParameterDomainError("integrator tolerances must be positive");
  }
  require_finite(y0, "initial state");
  if (options.scheme == Scheme::ClassicalRK4) {
    return run_rk4(field, t0, y0, t_end, sample_dt, options, on_sample);
  }

  IntegratorStats stats;
  SampleClock clock(t0, t_end, sample_dt);
  const double atol = options.atol;
  const double rtol = options.rtol;
  const double max_step = options.max_step > 0.0 ? options.max_step : (t_end - t0);

  Vector y = y0;
  double t = t0;
  Vector k1 = field(t, y);
  ++stats.evaluations;
  if (!k1.allFinite()) {
    throw StepUnderflow("vector field is non-finite at the initial state", t);
  }

  if (!on_sample(t, y)) {
    stats.final_time = t;
    return stats;
  }
  clock.advance();

  // Starting step (Hairer's heuristic).
  double h = options.initial_step;
  if (!(h > 0.0)) {
    const double d0 = scaled_norm(y, y, y, atol, rtol);
    const double d1n = scaled_norm(k1, y, y, atol, rtol);
    double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    h0 = std::min(h0, max_step);
    const Vector y1 = y + h0 * k1;
    const Vector f1 = field(t + h0, y1);
    ++stats.evaluations;
    const double d2 = scaled_norm(f1 - k1, y, y, atol, rtol) / h0;
    const double dm = std::max(d1n, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    h = std::min({100.0 * h0, h1, max_step});
  }

  bool last_rejected = false;
  while (!clock.done()) {
    if (stats.accepted + stats.rejected >= options.max_steps) {
      throw StepUnderflow("integrator step budget exhausted", t);
    }
    h = std::min(h, t_end - t);
    const double h_min = 1e-14 * std::max(1.0, std::abs(t));
    if (h < h_min) {
      throw StepUnderflow("step size underflow at t = " + std::to_string(t), t);
    }

    const Vector k2 = field(t + c2 * h, y + h * (a21 * k1));
    const Vector k3 = field(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const Vector k4 = field(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vector k5 = field(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vector k6 =
        field(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Vector y_new = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    const Vector k7 = field(t + h, y_new);
    stats.evaluations += 6;

    const Vector err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const bool finite = y_new.allFinite() && k7.allFinite() && err.allFinite();
    const double err_norm = finite ? scaled_norm(err, y, y_new, atol, rtol) : HUGE_VAL;

    if (err_norm <= 1.0) {
      const double t_new = t + h;
      stats.accumulated_error += err.norm();
      stats.max_local_error = std::max(stats.max_local_error, err.norm());
      ++stats.accepted;

      // Dense output for every sample time in (t, t_new].
      bool keep_going = true;
      if (!clock.done() && clock.next() <= t_new + 1e-12 * std::abs(h)) {
        const Vector ydiff = y_new - y;
        const Vector bspl = h * k1 - ydiff;
        const Vector r4 = ydiff - h * k7 - bspl;
        const Vector r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
        while (keep_going && !clock.done() && clock.next() <= t_new + 1e-12 * std::abs(h)) {
          const double ts = clock.next();
          Vector ys;
          if (ts >= t_new) {
            ys = y_new;
          } else {
            const double s = (ts - t) / h;
            const double s1 = 1.0 - s;
            ys = y + s * (ydiff + s1 * (bspl + s * (r4 + s1 * r5)));
          }
          clock.advance();
          keep_going = on_sample(ts, ys);
        }
      }

      t = t_new;
      y = y_new;
      k1 = k7;
      stats.final_time = t;
      if (!keep_going) {
        break;
      }

      double factor = err_norm == 0.0 ? 5.0 : 0.9 * std::pow(err_norm, -0.2);
      factor = std::clamp(factor, 0.2, 5.0);
      if (last_rejected) {
        factor = std::min(factor, 1.0);
      }
      h = std::min(h * factor, max_step);
      last_rejected = false;
    } else {
      ++stats.rejected;
      const double factor =
          finite ? std::clamp(0.9 * std::pow(err_norm, -0.2), 0.1, 0.9) : 0.2;
      h *= factor;
      last_rejected = true;
    }
  }
  return stats;
}

}  // namespace accsplit
