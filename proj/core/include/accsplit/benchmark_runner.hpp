#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "accsplit/certificates.hpp"
#include "accsplit/dynamics.hpp"
#include "accsplit/generators.hpp"
#include "accsplit/trajectory.hpp"

namespace accsplit {

enum class ExampleKind { LassoL1, BoxQP, LogisticL1 };

[[nodiscard]] const char* to_string(ExampleKind kind);
[[nodiscard]] ExampleKind example_kind_from_string(const std::string& name);

enum class BaselineKind { DiscreteFb, DiscreteDr };

[[nodiscard]] const char* to_string(BaselineKind kind);
[[nodiscard]] BaselineKind baseline_kind_from_string(const std::string& name);

/// One experiment. Defaults are the desk-scale setups; `mu`, `alpha` and the
/// fit window fall back to the per-example rules when left empty.
struct BenchmarkConfig {
  ExampleKind example = ExampleKind::LassoL1;
  Index rows = 20;
  Index cols = 100;
  double kappa = 1e3;
  double rho = 0.1;
  double feature_mean = 1.0;
  LambdaRule lambda = LambdaRule::fraction_of_max(0.1);
  std::uint64_t seed = 7;
  std::vector<DynamicsKind> dynamics;
  std::vector<BaselineKind> baselines;
  double t_end = 200.0;
  double tol = 1e-9;
  double sample_dt = 0.5;
  std::optional<double> mu;
  std::optional<double> alpha;
  std::optional<TimeWindow> window;
  /// Evaluate the Lyapunov function and attach decay/Gronwall checks.
  bool lyapunov = true;

  /// Desk-scale defaults for the example (dims, horizon, dynamics).
  static BenchmarkConfig defaults(ExampleKind example);
};

/// {"schema": 1, "example": "lasso_l1"|"box_qp"|"logistic_l1", "rows", "cols",
///  "kappa", "rho", "feature_mean", "lambda": {"rule": "fraction"|"fixed",
///  "value"}, "seed", "dynamics": [...], "baselines": ["fb", "dr"], "t_end",
///  "tol", "sample_dt", "mu", "alpha", "window": [a, b], "lyapunov"}.
/// Absent keys take the example's defaults.
[[nodiscard]] BenchmarkConfig config_from_json(const std::string& text);
[[nodiscard]] std::string config_to_json(const BenchmarkConfig& config);
[[nodiscard]] BenchmarkConfig load_config(const std::string& path);

struct NamedCertificate {
  std::string name;
  CertificateReport report;
};

struct DynamicsRun {
  DynamicsKind kind = DynamicsKind::AccFb;
  bool ok = false;
  std::string error;
  double mu = 0.0;
  double alpha = 0.0;
  /// Theoretical rate used by the exponential certificates (0 for convex).
  double rho = 0.0;
  double final_gap = 0.0;
  double final_dist_sq = 0.0;
  double wall_seconds = 0.0;
  Trajectory trajectory;
  std::vector<NamedCertificate> certificates;

  [[nodiscard]] bool pass() const;
};

struct BaselineRun {
  BaselineKind kind = BaselineKind::DiscreteFb;
  bool ok = false;
  std::string error;
  /// t_k = k h / alpha with h = 1/L.
  std::vector<double> times;
  std::vector<double> objective_gap;
  std::vector<double> dist_sq;
  Vector final_x;
};

struct ProblemMetadata {
  Index n = 0;
  Index rows = 0;
  double m = 0.0;
  double L = 0.0;
  double kappa = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
  double alpha = 0.0;
  double F_star = 0.0;
  double reference_residual = 0.0;
  std::size_t reference_iterations = 0;
};

struct BenchmarkReport {
  BenchmarkConfig config;
  ProblemMetadata problem;
  Reference reference;
  std::vector<DynamicsRun> runs;
  std::vector<BaselineRun> baselines;
  double wall_seconds = 0.0;

  /// Every run succeeded and every attached certificate passed.
  [[nodiscard]] bool pass() const;
};

/// Builds the problem of the config.
[[nodiscard]] GeneratedProblem generate_problem(const BenchmarkConfig& config);

/// Generates the problem, solves for x*, integrates every requested dynamics
/// (concurrently), runs the discrete baselines and attaches the certificates
/// of the example's theorem. Failures are recorded per run.
[[nodiscard]] BenchmarkReport run_benchmark(const BenchmarkConfig& config);

[[nodiscard]] std::string report_to_json(const BenchmarkReport& report);

/// Writes <dir>/report.json, <dir>/traces/<dynamics>.csv,
/// <dir>/traces/baseline_<kind>.csv and certificate details under
/// <dir>/details/.
void write_benchmark_outputs(BenchmarkReport& report, const std::string& dir);

}  // namespace accsplit
