// accsplit: run benchmarks, certify traces, verify the analysis inequalities
// and evaluate envelopes from the command line.
//
// Exit status: 0 when every certificate passes, 2 when one fails, 1 on error.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "accsplit/benchmark_runner.hpp"
#include "accsplit/certificates.hpp"
#include "accsplit/conditions.hpp"
#include "accsplit/envelopes.hpp"
#include "accsplit/errors.hpp"
#include "accsplit/generators.hpp"
#include "accsplit/problem_io.hpp"
#include "accsplit/trajectory.hpp"

namespace fs = std::filesystem;
using namespace accsplit;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitError = 1;
constexpr int kExitFail = 2;

int verdict(bool pass) { return pass ? kExitPass : kExitFail; }

TimeWindow parse_window(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw InvalidInput("--window expects 'a,b'");
  }
  try {
    return TimeWindow{std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::logic_error&) {
    throw InvalidInput("--window expects two numbers 'a,b'");
  }
}

/// Numbers separated by commas, whitespace or newlines; a non-numeric first
/// line is taken as a header and skipped.
Vector read_point(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidInput("cannot open point file " + path);
  }
  std::vector<double> values;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    std::string tok;
    std::vector<double> row;
    bool numeric = true;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(tok, &used));
        numeric = numeric && used == tok.size();
      } catch (const std::logic_error&) {
        numeric = false;
      }
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;
      }
      throw InvalidInput("point file: non-numeric entry in " + path);
    }
    first = false;
    values.insert(values.end(), row.begin(), row.end());
  }
  return Eigen::Map<Vector>(values.data(), static_cast<Index>(values.size()));
}

void print_run_summary(const BenchmarkReport& report) {
  std::cout << "example " << to_string(report.config.example) << "  n=" << report.problem.n
            << "  L=" << report.problem.L << "  m=" << report.problem.m << "  mu=" << report.problem.mu
            << "  alpha=" << report.problem.alpha << '\n';
  for (const auto& run : report.runs) {
    std::cout << "  " << to_string(run.kind) << ": " << (run.pass() ? "PASS" : "FAIL");
    for (const auto& c : run.certificates) {
      std::cout << "  " << c.name << "=" << c.report.fitted << (c.report.pass ? "" : "(fail)");
    }
    if (!run.error.empty()) std::cout << "  error: " << run.error;
    std::cout << '\n';
  }
  for (const auto& b : report.baselines) {
    std::cout << "  baseline " << to_string(b.kind) << ": "
              << (b.ok ? "final dist_sq " + format_double(b.dist_sq.back()) : "error: " + b.error) << '\n';
  }
}

int cmd_run(const std::string& config_path, const std::string& out_dir) {
  const BenchmarkConfig config = load_config(config_path);
  BenchmarkReport report = run_benchmark(config);
  write_benchmark_outputs(report, out_dir);
  print_run_summary(report);
  return verdict(report.pass());
}

int cmd_certify(const std::string& trace, const std::string& mode, double rho, const std::string& window,
                const std::string& out_dir) {
  const TraceTable table = read_trace_csv(trace);
  const TimeWindow w = parse_window(window);
  CertificateReport report;
  if (mode == "sublinear") {
    report = certify_sublinear(table.column("t"), table.column("objective_gap"), w);
  } else if (mode == "exponential") {
    report = certify_exponential(table.column("t"), table.column("dist_sq"), rho, w);
  } else {
    throw InvalidInput("--mode must be sublinear or exponential");
  }
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_details_csv(report, (fs::path(out_dir) / (mode + "_fit.csv")).string());
    std::ofstream(fs::path(out_dir) / "report.json") << report_to_json(report) << '\n';
  }
  std::cout << report_to_json(report) << '\n';
  return verdict(report.pass);
}

CertificateReport verify_lemma3(std::size_t problems, std::size_t samples, std::uint64_t seed) {
  CertificateReport total;
  total.kind = CertificateKind::Lemma3;
  total.pass = true;
  total.fitted = std::numeric_limits<double>::infinity();
  total.worst_slack = std::numeric_limits<double>::infinity();
  total.detail_columns = {"problem", "smooth_kind", "worst_margin", "worst_slack"};
  for (std::size_t k = 0; k < problems; ++k) {
    const std::uint64_t s = seed + k;
    CertificateReport r;
    if (k % 2 == 0) {
      const auto gen = gen_quadratic_l1(20, 1.0, 10.0, 0.5, s);
      r = check_lemma3(gen.problem, 0.05, samples, s);
    } else {
      const auto gen = gen_logistic(30, 20, 0.1, LambdaRule::fraction_of_max(0.1), s);
      r = check_lemma3(gen.problem, 0.5 / gen.problem.L(), samples, s);
    }
    total.pass = total.pass && r.pass;
    total.fitted = std::min(total.fitted, r.fitted);
    total.worst_slack = std::min(total.worst_slack, r.worst_slack);
    total.n_samples += r.n_samples;
    total.detail_rows.push_back({static_cast<double>(k), k % 2 == 0 ? 0.0 : 1.0, r.fitted, r.worst_slack});
  }
  return total;
}

int cmd_verify(const std::string& what, std::size_t grid, std::uint64_t seed, std::size_t problems,
               std::size_t samples, const std::string& out_dir) {
  CertificateReport report;
  fs::create_directories(out_dir);
  const fs::path root(out_dir);
  if (what == "lemma3") {
    report = verify_lemma3(problems, samples, seed);
    write_details_csv(report, (root / "lemma3.csv").string());
  } else if (what == "conditions") {
    report = conditions_sweep(uniform_w_grid(grid));
    write_details_csv(report, (root / "conditions.csv").string());
  } else if (what == "hcurve") {
    report = h_curve(uniform_w_grid(grid));
    write_details_csv(report, (root / "hcurve_monotonicity.csv").string());
    write_hcurve_csv(report, (root / "hcurve.csv").string());
    report.details_path = (root / "hcurve.csv").string();
  } else {
    throw InvalidInput("verify target must be lemma3, conditions or hcurve");
  }
  std::ofstream(root / "report.json") << report_to_json(report) << '\n';
  std::cout << report_to_json(report) << '\n';
  return verdict(report.pass);
}

int cmd_envelope(const std::string& problem_path, const std::string& point_path, double mu,
                 const std::string& kind) {
  const CompositeProblem problem = load_problem(problem_path);
  const Vector x = read_point(point_path);
  if (x.size() != problem.dimension()) {
    throw InvalidInput("point has " + std::to_string(x.size()) + " entries, problem has " +
                       std::to_string(problem.dimension()));
  }
  EnvelopeEval e;
  if (kind == "fb") {
    e = fb_envelope(problem, x, mu);
  } else if (kind == "dr") {
    e = dr_envelope(problem, x, mu);
  } else {
    throw InvalidInput("--kind must be fb or dr");
  }
  auto vec = [](const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  nlohmann::json j;
  j["kind"] = kind;
  j["mu"] = mu;
  j["value"] = e.value;
  j["gradient"] = vec(e.gradient);
  j["gen_grad"] = vec(e.gen_grad);
  j["prox_point"] = vec(e.prox_point);
  j["objective_at_prox_point"] = problem.objective(e.prox_point);
  std::cout << j.dump(2) << '\n';
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"accelerated splitting dynamics: benchmarks and certificates"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  auto* run = app.add_subcommand("run", "generate a benchmark problem, integrate and certify");
  run->add_option("--config", config_path, "benchmark config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "output directory")->required();

  std::string trace, mode, window, certify_out;
  double rho = 0.0;
  auto* certify = app.add_subcommand("certify", "fit a rate to a trace CSV");
  certify->add_option("--trace", trace, "trajectory CSV")->required()->check(CLI::ExistingFile);
  certify->add_option("--mode", mode, "sublinear or exponential")
      ->required()
      ->check(CLI::IsMember({"sublinear", "exponential"}));
  certify->add_option("--rho", rho, "theoretical exponential rate");
  certify->add_option("--window", window, "fit window a,b")->required();
  certify->add_option("--out", certify_out, "optional output directory");

  std::string what, verify_out;
  std::size_t grid = 1000, problems = 10, samples = 1000;
  std::uint64_t seed = 1;
  auto* verify = app.add_subcommand("verify", "check the envelope gap bounds, the parameter conditions or the h(w) curve");
  verify->add_option("what", what, "lemma3 | conditions | hcurve")
      ->required()
      ->check(CLI::IsMember({"lemma3", "conditions", "hcurve"}));
  verify->add_option("--grid", grid, "number of w grid points")->check(CLI::PositiveNumber);
  verify->add_option("--seed", seed, "random seed");
  verify->add_option("--problems", problems, "lemma3: number of random problems")->check(CLI::PositiveNumber);
  verify->add_option("--samples", samples, "lemma3: pairs per problem")->check(CLI::PositiveNumber);
  verify->add_option("--out", verify_out, "output directory")->required();

  std::string problem_path, point_path, kind = "fb";
  double mu = 0.0;
  auto* envelope = app.add_subcommand("envelope", "evaluate an envelope and its gradient at a point");
  envelope->add_option("--problem", problem_path, "problem JSON")->required()->check(CLI::ExistingFile);
  envelope->add_option("--point", point_path, "point CSV")->required()->check(CLI::ExistingFile);
  envelope->add_option("--mu", mu, "envelope parameter")->required();
  envelope->add_option("--kind", kind, "fb or dr")->check(CLI::IsMember({"fb", "dr"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitError;
  }

  try {
    if (*run) return cmd_run(config_path, out_dir);
    if (*certify) {
      if (mode == "exponential" && !(rho > 0.0)) {
        throw InvalidInput("--rho must be positive for the exponential mode");
      }
      return cmd_certify(trace, mode, rho, window, certify_out);
    }
    if (*verify) return cmd_verify(what, grid, seed, problems, samples, verify_out);
    if (*envelope) return cmd_envelope(problem_path, point_path, mu, kind);
  } catch (const std::exception& e) {
    std::cerr << "accsplit: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
