#pragma once

#include <functional>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "accsplit/dynamics.hpp"
#include "accsplit/integrator.hpp"

namespace accsplit {

/// Minimizer and optimal value of F, used to report errors along a run.
struct Reference {
  Vector x_star;
  double F_star = 0.0;
};

struct SampleObservables {
  static constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
  /// F(p_mu(x)) - F*; F(p_mu(x)) when no reference is known.
  double objective_gap = kMissing;
  /// F_mu(x) for FB kinds, D_mu(z) for DR kinds.
  double envelope = kMissing;
  double dist_sq = kMissing;
  double lyapunov = kMissing;
};

struct Trajectory {
  DynamicsKind kind = DynamicsKind::AccFb;
  Index dimension = 0;
  std::vector<double> times;
  /// x for FB kinds, z for DR kinds.
  std::vector<Vector> positions;
  /// Empty vectors for the first-order flows.
  std::vector<Vector> velocities;
  /// x at every sample (prox_{mu f}(z) for DR kinds).
  std::vector<Vector> primal;
  std::vector<SampleObservables> observables;
  IntegratorStats stats;
  bool stopped_at_equilibrium = false;

  [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
  /// psi = (position, velocity) at sample i.
  [[nodiscard]] Vector state(std::size_t i) const;
};

struct IntegrateOptions {
  IntegratorOptions integrator{};
  std::optional<Reference> reference;
  /// Evaluated at every sample when set; receives (t, psi).
  std::function<double(double, const Vector&)> lyapunov;
  /// Stop once ||field|| <= 1e-12 (1 + ||psi||) at 5 consecutive samples.
  bool stop_at_equilibrium = true;
  /// Compute F(p_mu(x)) and envelope observables (costs one envelope
  /// evaluation per sample).
  bool record_objective = true;
};

/// Carries the samples gathered before the integrator gave up.
class IntegrationFailure : public std::runtime_error {
 public:
  IntegrationFailure(const std::string& what, Trajectory partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  [[nodiscard]] const Trajectory& partial() const noexcept { return partial_; }

 private:
  Trajectory partial_;
};

/// Integrates the dynamics from psi0 over [0, t_end] with rtol = atol = tol
/// (overriding options.integrator tolerances), sampling every sample_dt.
[[nodiscard]] Trajectory integrate(const DynamicsSpec& spec, const Vector& psi0, double t_end,
                                   double tol, double sample_dt, const IntegrateOptions& options = {});

/// psi0 = 0 with the right state size for the spec.
[[nodiscard]] Vector zero_state(const DynamicsSpec& spec);

// ---------------------------------------------------------------------------
// CSV traces
// ---------------------------------------------------------------------------

/// Columns: t, x_1..x_n, [z_1..z_n for DR], [v_1..v_n for accelerated],
/// objective_gap, dist_sq, lyapunov. Values in %.17e.
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);
void write_trajectory_csv(const Trajectory& traj, const std::string& path);

/// Column-oriented view of any CSV with a header row.
struct TraceTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  [[nodiscard]] bool has(const std::string& name) const;
  [[nodiscard]] const std::vector<double>& column(const std::string& name) const;
  [[nodiscard]] std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

[[nodiscard]] TraceTable read_trace_csv(std::istream& in);
[[nodiscard]] TraceTable read_trace_csv(const std::string& path);

/// Formats a double the way trace files store it.
[[nodiscard]] std::string format_double(double v);

}  // namespace accsplit
