#include "accsplit/benchmark_runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include <json.hpp>

#include "accsplit/errors.hpp"
#include "accsplit/lyapunov.hpp"
#include "accsplit/reference.hpp"

namespace accsplit {

using nlohmann::json;

const char* to_string(ExampleKind kind) {
  switch (kind) {
    case ExampleKind::LassoL1: return "lasso_l1";
    case ExampleKind::BoxQP: return "box_qp";
    case ExampleKind::LogisticL1: return "logistic_l1";
  }
  return "unknown";
}

ExampleKind example_kind_from_string(const std::string& name) {
  for (auto k : {ExampleKind::LassoL1, ExampleKind::BoxQP, ExampleKind::LogisticL1}) {
    if (name == to_string(k)) return k;
  }
  throw InvalidInput("unknown example '" + name + "'");
}

const char* to_string(BaselineKind kind) {
  return kind == BaselineKind::DiscreteFb ? "fb" : "dr";
}

BaselineKind baseline_kind_from_string(const std::string& name) {
  if (name == "fb") return BaselineKind::DiscreteFb;
  if (name == "dr") return BaselineKind::DiscreteDr;
  throw InvalidInput("unknown baseline '" + name + "'");
}

BenchmarkConfig BenchmarkConfig::defaults(ExampleKind example) {
  BenchmarkConfig c;
  c.example = example;
  switch (example) {
    case ExampleKind::LassoL1:
      c.rows = 20;
      c.cols = 100;
      c.t_end = 200.0;
      c.window = TimeWindow{10.0, 200.0};
      c.lambda = LambdaRule::fraction_of_max(0.01);
      c.dynamics = {DynamicsKind::AccFb, DynamicsKind::AccDr, DynamicsKind::FbFlow, DynamicsKind::DrFlow};
      c.baselines = {BaselineKind::DiscreteFb, BaselineKind::DiscreteDr};
      break;
    case ExampleKind::BoxQP:
      c.rows = 0;
      c.cols = 50;
      c.kappa = 1e3;
      c.seed = 3;
      c.t_end = 800.0;
      c.dynamics = {DynamicsKind::AccFb, DynamicsKind::AccDr, DynamicsKind::FbFlow, DynamicsKind::DrFlow};
      c.baselines = {BaselineKind::DiscreteFb, BaselineKind::DiscreteDr};
      break;
    case ExampleKind::LogisticL1:
      c.rows = 40;
      c.cols = 80;
      c.rho = 0.1;
      c.t_end = 2000.0;
      c.dynamics = {DynamicsKind::AccFb, DynamicsKind::FbFlow};
      c.baselines = {BaselineKind::DiscreteFb};
      break;
  }
  return c;
}

// ---------------------------------------------------------------------------
// config JSON
// ---------------------------------------------------------------------------

BenchmarkConfig config_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (!j.contains("schema") || j.at("schema").get<int>() != 1) {
      throw InvalidInput("benchmark config: expected \"schema\": 1");
    }
    BenchmarkConfig c = BenchmarkConfig::defaults(example_kind_from_string(j.at("example").get<std::string>()));
    c.rows = j.value("rows", c.rows);
    c.cols = j.value("cols", c.cols);
    c.kappa = j.value("kappa", c.kappa);
    c.rho = j.value("rho", c.rho);
    c.feature_mean = j.value("feature_mean", c.feature_mean);
    c.seed = j.value("seed", c.seed);
    c.t_end = j.value("t_end", c.t_end);
    c.tol = j.value("tol", c.tol);
    c.sample_dt = j.value("sample_dt", c.sample_dt);
    c.lyapunov = j.value("lyapunov", c.lyapunov);
    if (j.contains("lambda")) {
      const auto& l = j.at("lambda");
      const auto rule = l.at("rule").get<std::string>();
      const double v = l.at("value").get<double>();
      if (rule == "fraction") {
        c.lambda = LambdaRule::fraction_of_max(v);
      } else if (rule == "fixed") {
        c.lambda = LambdaRule::fixed(v);
      } else {
        throw InvalidInput("benchmark config: lambda rule must be 'fraction' or 'fixed'");
      }
    }
    if (j.contains("dynamics")) {
      c.dynamics.clear();
      for (const auto& d : j.at("dynamics")) c.dynamics.push_back(dynamics_kind_from_string(d.get<std::string>()));
    }
    if (j.contains("baselines")) {
      c.baselines.clear();
      for (const auto& b : j.at("baselines")) c.baselines.push_back(baseline_kind_from_string(b.get<std::string>()));
    }
    if (j.contains("mu") && !j.at("mu").is_null()) c.mu = j.at("mu").get<double>();
    if (j.contains("alpha") && !j.at("alpha").is_null()) c.alpha = j.at("alpha").get<double>();
    if (j.contains("window") && !j.at("window").is_null()) {
      const auto w = j.at("window").get<std::vector<double>>();
      if (w.size() != 2) throw InvalidInput("benchmark config: window must be [begin, end]");
      c.window = TimeWindow{w[0], w[1]};
    }
    if (!(c.t_end > 0.0) || !(c.sample_dt > 0.0)) {
      throw InvalidInput("benchmark config: t_end and sample_dt must be positive");
    }
    if (c.cols < 1 || (c.example != ExampleKind::BoxQP && c.rows < 1)) {
      throw InvalidInput("benchmark config: dimensions must be positive");
    }
    return c;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("benchmark config: ") + e.what());
  }
}

std::string config_to_json(const BenchmarkConfig& c) {
  json j;
  j["schema"] = 1;
  j["example"] = to_string(c.example);
  j["rows"] = c.rows;
  j["cols"] = c.cols;
  j["kappa"] = c.kappa;
  j["rho"] = c.rho;
  j["feature_mean"] = c.feature_mean;
  j["lambda"] = {{"rule", c.lambda.kind == LambdaRule::Kind::FractionOfMax ? "fraction" : "fixed"},
                 {"value", c.lambda.value}};
  j["seed"] = c.seed;
  j["dynamics"] = json::array();
  for (auto d : c.dynamics) j["dynamics"].push_back(to_string(d));
  j["baselines"] = json::array();
  for (auto b : c.baselines) j["baselines"].push_back(to_string(b));
  j["t_end"] = c.t_end;
  j["tol"] = c.tol;
  j["sample_dt"] = c.sample_dt;
  j["lyapunov"] = c.lyapunov;
  if (c.mu) j["mu"] = *c.mu;
  if (c.alpha) j["alpha"] = *c.alpha;
  if (c.window) j["window"] = {c.window->begin, c.window->end};
  return j.dump(2);
}

BenchmarkConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidInput("cannot open config " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

// ---------------------------------------------------------------------------
// running
// ---------------------------------------------------------------------------

bool DynamicsRun::pass() const {
  return ok && std::all_of(certificates.begin(), certificates.end(),
                           [](const NamedCertificate& c) { return c.report.pass; });
}

bool BenchmarkReport::pass() const {
  return std::all_of(runs.begin(), runs.end(), [](const DynamicsRun& r) { return r.pass(); }) &&
         std::all_of(baselines.begin(), baselines.end(), [](const BaselineRun& b) { return b.ok; });
}

GeneratedProblem generate_problem(const BenchmarkConfig& c) {
  switch (c.example) {
    case ExampleKind::LassoL1: return gen_lasso(c.rows, c.cols, c.lambda, c.seed);
    case ExampleKind::BoxQP: return gen_boxqp(c.cols, c.kappa, c.seed);
    case ExampleKind::LogisticL1: return gen_logistic(c.rows, c.cols, c.rho, c.lambda, c.seed, c.feature_mean);
  }
  throw InvalidInput("unknown example");
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct RunPlan {
  DynamicsSpec spec;
  double rho = 0.0;
};

/// mu = min(1/(L kappa^(1/4)), sqrt(gamma beta)/(2L)) for the logistic runs,
/// 1/(2L) otherwise.
double default_mu(const BenchmarkConfig& c, const CompositeProblem& p, double alpha) {
  const double L = p.L();
  if (c.example != ExampleKind::LogisticL1) {
    return 0.5 / L;
  }
  const auto s = ParameterSchedule::strongly_convex(alpha, p.m());
  const double kappa = L / p.m();
  return std::min(1.0 / (L * std::pow(kappa, 0.25)), std::sqrt(s.gamma(0.0) * s.beta(0.0)) / (2.0 * L));
}

RunPlan plan_run(const BenchmarkConfig& c, const CompositeProblem& p, DynamicsKind kind, double mu,
                 double alpha) {
  RunPlan plan{DynamicsSpec{kind, p, mu, ParameterSchedule::convex(alpha)}, 0.0};
  if (c.example == ExampleKind::LassoL1) {
    return plan;
  }
  if (!is_accelerated(kind)) {
    plan.rho = alpha * p.m();
    return plan;
  }
  const double m_eff = c.example == ExampleKind::BoxQP
                           ? envelope_constants(p.m(), p.L(), mu, envelope_of(kind)).m_env
                           : p.m();
  plan.spec.schedule = ParameterSchedule::strongly_convex(alpha, m_eff);
  plan.rho = plan.spec.schedule.rho();
  return plan;
}

/// Window for exponential fits: from 20% of the usable horizon to the last
/// sample still clear of the accuracy floor.
TimeWindow auto_exponential_window(const Trajectory& traj) {
  double peak = 0.0;
  for (const auto& o : traj.observables) peak = std::max(peak, o.dist_sq);
  const double floor = std::max(1e-14, 1e-12 * peak);
  double last = traj.times.front();
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (traj.observables[k].dist_sq >= floor) last = traj.times[k];
  }
  return TimeWindow{0.2 * last, last};
}

void attach(DynamicsRun& run, const std::string& name, const std::function<CertificateReport()>& make) {
  try {
    run.certificates.push_back({name, make()});
  } catch (const std::exception& e) {
    CertificateReport failed;
    failed.pass = false;
    run.certificates.push_back({name, failed});
    if (!run.error.empty()) run.error += "; ";
    run.error += name + ": " + e.what();
  }
}

DynamicsRun execute(const BenchmarkConfig& c, const RunPlan& plan, const Reference& ref) {
  const auto start = Clock::now();
  DynamicsRun run;
  run.kind = plan.spec.kind;
  run.mu = plan.spec.mu;
  run.alpha = plan.spec.schedule.alpha();
  run.rho = plan.rho;
  try {
    plan.spec.validate();
    IntegrateOptions opts;
    opts.reference = ref;
    std::optional<LyapunovFunction> V;
    if (c.lyapunov && is_accelerated(plan.spec.kind)) {
      V.emplace(lyapunov_spec_for(plan.spec, ref), plan.spec.problem);
      opts.lyapunov = [&V](double t, const Vector& psi) { return (*V)(t, psi); };
    }
    // keep sampling to the end so fit windows see the whole horizon
    opts.stop_at_equilibrium = false;
    run.trajectory = integrate(plan.spec, zero_state(plan.spec), c.t_end, c.tol, c.sample_dt, opts);
    run.ok = true;
    const auto& last = run.trajectory.observables.back();
    run.final_gap = last.objective_gap;
    run.final_dist_sq = last.dist_sq;

    const auto& traj = run.trajectory;
    if (c.example == ExampleKind::LassoL1) {
      const TimeWindow w = c.window.value_or(TimeWindow{10.0, c.t_end});
      if (is_accelerated(plan.spec.kind)) {
        attach(run, "sublinear", [&] { return certify_sublinear(traj, w); });
      } else {
        attach(run, "sublinear_contrast", [&] {
          auto r = certify_sublinear(traj, w);
          // the flow should be visibly slower than 1/t^2
          r.theoretical = -1.0;
          r.worst_slack = r.fitted + 1.5;
          r.pass = r.fitted > -1.5;
          return r;
        });
      }
    } else {
      const TimeWindow w = c.window.value_or(auto_exponential_window(traj));
      attach(run, is_accelerated(plan.spec.kind) ? "exponential" : "flow_exponential",
             [&] { return certify_exponential(traj, plan.rho, w); });
    }
    if (V) {
      attach(run, "lyapunov_decay", [&] { return check_lyapunov_decay(traj, *V); });
      attach(run, "gronwall", [&] { return check_gronwall(traj, *V); });
    }
    run.ok = run.error.empty();
  } catch (const IntegrationFailure& e) {
    run.ok = false;
    run.error = e.what();
    run.trajectory = e.partial();
  } catch (const std::exception& e) {
    run.ok = false;
    run.error = e.what();
  }
  run.wall_seconds = seconds_since(start);
  return run;
}

BaselineRun execute_baseline(const BenchmarkConfig& c, BaselineKind kind, const CompositeProblem& p, double mu,
                             double alpha, const Reference& ref) {
  BaselineRun b;
  b.kind = kind;
  try {
    const double h = 1.0 / p.L();
    const auto steps = static_cast<std::size_t>(std::floor(c.t_end * alpha / h));
    Vector x = Vector::Zero(p.dimension());
    std::optional<SmoothProx> prox;
    Vector z;
    if (kind == BaselineKind::DiscreteDr) {
      prox.emplace(p.f(), mu);
      z = Vector::Zero(p.dimension());
      x = (*prox)(z);
    }
    for (std::size_t k = 0;; ++k) {
      b.times.push_back(static_cast<double>(k) * h / alpha);
      b.objective_gap.push_back(p.objective(prox_g(p.g(), x - mu * grad_f(p.f(), x), mu)) - ref.F_star);
      b.dist_sq.push_back((x - ref.x_star).squaredNorm());
      if (k == steps) break;
      if (kind == BaselineKind::DiscreteFb) {
        x = discrete_fb_step(p, x, mu, mu);
      } else {
        z = discrete_dr_step(p, *prox, z);
        x = (*prox)(z);
      }
    }
    b.final_x = x;
    b.ok = true;
  } catch (const std::exception& e) {
    b.ok = false;
    b.error = e.what();
  }
  return b;
}

}  // namespace

BenchmarkReport run_benchmark(const BenchmarkConfig& config) {
  const auto start = Clock::now();
  BenchmarkReport report;
  report.config = config;

  const GeneratedProblem gen = generate_problem(config);
  const CompositeProblem& p = gen.problem;
  const double alpha = config.alpha.value_or(1.0 / p.L());
  const double mu = config.mu.value_or(default_mu(config, p, alpha));
  require_envelope_mu(mu, p.L());

  const auto ref = solve_reference(p, mu);
  report.reference = ref.reference;
  report.problem = ProblemMetadata{p.dimension(),
                                   config.example == ExampleKind::BoxQP ? 0 : config.rows,
                                   p.m(),
                                   p.L(),
                                   p.m() > 0.0 ? p.L() / p.m() : std::numeric_limits<double>::infinity(),
                                   gen.lambda,
                                   mu,
                                   alpha,
                                   ref.reference.F_star,
                                   ref.residual,
                                   ref.iterations};

  std::vector<std::future<DynamicsRun>> pending;
  for (DynamicsKind kind : config.dynamics) {
    const RunPlan plan = plan_run(config, p, kind, mu, alpha);
    pending.push_back(std::async(std::launch::async, [&config, plan, &ref] {
      return execute(config, plan, ref.reference);
    }));
  }
  for (BaselineKind kind : config.baselines) {
    report.baselines.push_back(execute_baseline(config, kind, p, mu, alpha, ref.reference));
  }
  for (auto& f : pending) {
    report.runs.push_back(f.get());
  }
  report.wall_seconds = seconds_since(start);
  return report;
}

// ---------------------------------------------------------------------------
// output
// ---------------------------------------------------------------------------

namespace {

json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

std::string report_to_json(const BenchmarkReport& r) {
  json j;
  j["schema"] = 1;
  j["example"] = to_string(r.config.example);
  j["config"] = json::parse(config_to_json(r.config));
  const auto& m = r.problem;
  j["problem"] = {{"n", m.n},
                  {"rows", m.rows},
                  {"m", number(m.m)},
                  {"L", number(m.L)},
                  {"kappa", number(m.kappa)},
                  {"lambda", number(m.lambda)},
                  {"mu", number(m.mu)},
                  {"alpha", number(m.alpha)},
                  {"F_star", number(m.F_star)},
                  {"reference_residual", number(m.reference_residual)},
                  {"reference_iterations", m.reference_iterations}};
  j["runs"] = json::array();
  for (const auto& run : r.runs) {
    json jr;
    jr["dynamics"] = to_string(run.kind);
    jr["ok"] = run.ok;
    jr["pass"] = run.pass();
    jr["error"] = run.error;
    jr["mu"] = number(run.mu);
    jr["alpha"] = number(run.alpha);
    jr["rho"] = number(run.rho);
    jr["final_gap"] = number(run.final_gap);
    jr["final_dist_sq"] = number(run.final_dist_sq);
    jr["samples"] = run.trajectory.size();
    jr["accepted_steps"] = run.trajectory.stats.accepted;
    jr["rejected_steps"] = run.trajectory.stats.rejected;
    jr["wall_seconds"] = run.wall_seconds;
    jr["certificates"] = json::array();
    for (const auto& c : run.certificates) {
      json jc = json::parse(report_to_json(c.report));
      jc["name"] = c.name;
      jr["certificates"].push_back(jc);
    }
    j["runs"].push_back(jr);
  }
  j["baselines"] = json::array();
  for (const auto& b : r.baselines) {
    json jb;
    jb["baseline"] = to_string(b.kind);
    jb["ok"] = b.ok;
    jb["error"] = b.error;
    jb["iterations"] = b.times.empty() ? 0 : b.times.size() - 1;
    jb["final_gap"] = number(b.objective_gap.empty() ? std::nan("") : b.objective_gap.back());
    jb["final_dist_sq"] = number(b.dist_sq.empty() ? std::nan("") : b.dist_sq.back());
    j["baselines"].push_back(jb);
  }
  j["wall_seconds"] = r.wall_seconds;
  j["pass"] = r.pass();
  return j.dump(2);
}

void write_benchmark_outputs(BenchmarkReport& report, const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  fs::create_directories(root / "traces");
  fs::create_directories(root / "details");
  for (auto& run : report.runs) {
    if (run.trajectory.size() > 0) {
      write_trajectory_csv(run.trajectory, (root / "traces" / (std::string(to_string(run.kind)) + ".csv")).string());
    }
    for (auto& c : run.certificates) {
      if (c.report.detail_rows.empty()) continue;
      const auto path = root / "details" / (std::string(to_string(run.kind)) + "_" + c.name + ".csv");
      write_details_csv(c.report, path.string());
    }
  }
  for (const auto& b : report.baselines) {
    if (!b.ok) continue;
    std::ofstream out(root / "traces" / ("baseline_" + std::string(to_string(b.kind)) + ".csv"));
    out << "k,t,objective_gap,dist_sq\n";
    for (std::size_t k = 0; k < b.times.size(); ++k) {
      out << k << ',' << format_double(b.times[k]) << ',' << format_double(b.objective_gap[k]) << ','
          << format_double(b.dist_sq[k]) << '\n';
    }
  }
  std::ofstream(root / "report.json") << report_to_json(report) << '\n';
}

}  // namespace accsplit
