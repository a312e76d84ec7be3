#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "accsplit/benchmark_runner.hpp"
#include "accsplit/errors.hpp"
#include "accsplit/trajectory.hpp"

using namespace accsplit;
namespace fs = std::filesystem;

namespace {

BenchmarkConfig small_boxqp() {
  BenchmarkConfig c = BenchmarkConfig::defaults(ExampleKind::BoxQP);
  c.cols = 10;
  c.kappa = 10.0;
  c.t_end = 300.0;
  c.sample_dt = 1.0;
  c.dynamics = {DynamicsKind::FbFlow, DynamicsKind::AccFb, DynamicsKind::AccDr};
  c.baselines = {BaselineKind::DiscreteFb, BaselineKind::DiscreteDr};
  return c;
}

}  // namespace

TEST(BenchmarkConfig, JsonRoundTrip) {
  for (auto ex : {ExampleKind::LassoL1, ExampleKind::BoxQP, ExampleKind::LogisticL1}) {
    BenchmarkConfig c = BenchmarkConfig::defaults(ex);
    c.mu = 0.01;
    c.window = TimeWindow{1.0, 2.0};
    c.lambda = LambdaRule::fixed(0.25);
    const std::string text = config_to_json(c);
    const auto back = config_from_json(text);
    EXPECT_EQ(config_to_json(back), text);
    EXPECT_EQ(back.example, ex);
    EXPECT_EQ(*back.mu, 0.01);
    EXPECT_EQ(back.lambda.kind, LambdaRule::Kind::Fixed);
  }
}

TEST(BenchmarkConfig, DefaultsFillMissingKeys) {
  const auto c = config_from_json(R"({"schema": 1, "example": "lasso_l1", "seed": 3})");
  EXPECT_EQ(c.seed, 3u);
  EXPECT_EQ(c.rows, 20);
  EXPECT_EQ(c.cols, 100);
  EXPECT_EQ(c.dynamics.size(), 4u);
}

TEST(BenchmarkConfig, Rejections) {
  EXPECT_THROW((void)config_from_json(R"({"example": "lasso_l1"})"), InvalidInput);
  EXPECT_THROW((void)config_from_json(R"({"schema": 2, "example": "lasso_l1"})"), InvalidInput);
  EXPECT_THROW((void)config_from_json(R"({"schema": 1, "example": "sudoku"})"), InvalidInput);
  EXPECT_THROW((void)config_from_json(R"({"schema": 1, "example": "lasso_l1", "dynamics": ["nope"]})"),
               InvalidInput);
  EXPECT_THROW((void)config_from_json(R"({"schema": 1, "example": "lasso_l1", "t_end": -1})"), InvalidInput);
  EXPECT_THROW((void)config_from_json(R"({"schema": 1, "example": "lasso_l1", "window": [1]})"), InvalidInput);
  EXPECT_THROW((void)config_from_json("{"), InvalidInput);
  EXPECT_THROW((void)load_config("/nonexistent/config.json"), InvalidInput);
}

TEST(BenchmarkConfig, SameSeedSameProblem) {
  const auto c = BenchmarkConfig::defaults(ExampleKind::LogisticL1);
  const auto a = generate_problem(c), b = generate_problem(c);
  EXPECT_EQ(a.problem.f().as_logistic()->A, b.problem.f().as_logistic()->A);
  EXPECT_EQ(a.problem.f().as_logistic()->y, b.problem.f().as_logistic()->y);
}

TEST(RunBenchmark, ReproducibleAndBaselineAgrees) {
  const auto c = small_boxqp();
  const auto a = run_benchmark(c);
  const auto b = run_benchmark(c);
  ASSERT_EQ(a.runs.size(), 3u);
  EXPECT_TRUE(a.pass());
  for (std::size_t i = 0; i < a.runs.size(); ++i) {
    ASSERT_TRUE(a.runs[i].ok) << a.runs[i].error;
    ASSERT_EQ(a.runs[i].certificates.size(), b.runs[i].certificates.size());
    for (std::size_t k = 0; k < a.runs[i].certificates.size(); ++k) {
      EXPECT_EQ(a.runs[i].certificates[k].report.pass, b.runs[i].certificates[k].report.pass);
      EXPECT_NEAR(a.runs[i].certificates[k].report.fitted, b.runs[i].certificates[k].report.fitted, 1e-9);
    }
  }
  // discrete FB and the flow land on the same minimizer
  ASSERT_EQ(a.baselines.size(), 2u);
  ASSERT_TRUE(a.baselines[0].ok);
  EXPECT_LE((a.baselines[0].final_x - a.runs[0].trajectory.primal.back()).norm(), 1e-6);
  EXPECT_LE((a.baselines[0].final_x - a.reference.x_star).norm(), 1e-6);
  ASSERT_TRUE(a.baselines[1].ok);
  EXPECT_LE((a.baselines[1].final_x - a.reference.x_star).norm(), 1e-6);
  // t_k = k h / alpha with h = 1/L
  const double h = 1.0 / a.problem.L;
  EXPECT_NEAR(a.baselines[0].times[3], 3.0 * h / a.problem.alpha, 1e-12);
}

TEST(RunBenchmark, FailuresAreRecordedPerRun) {
  BenchmarkConfig c = BenchmarkConfig::defaults(ExampleKind::LogisticL1);
  c.t_end = 20.0;
  c.dynamics = {DynamicsKind::AccFb, DynamicsKind::AccDr};
  c.baselines = {BaselineKind::DiscreteDr};
  const auto r = run_benchmark(c);
  ASSERT_EQ(r.runs.size(), 2u);
  EXPECT_FALSE(r.runs[1].ok);
  EXPECT_FALSE(r.runs[1].error.empty());
  EXPECT_TRUE(r.runs[0].trajectory.size() > 0);
  ASSERT_EQ(r.baselines.size(), 1u);
  EXPECT_FALSE(r.baselines[0].ok);
  EXPECT_FALSE(r.pass());
}

TEST(RunBenchmark, OutputsRoundTrip) {
  auto c = small_boxqp();
  c.t_end = 60.0;
  auto report = run_benchmark(c);
  const fs::path dir = fs::temp_directory_path() / "accsplit_bench_outputs";
  fs::remove_all(dir);
  write_benchmark_outputs(report, dir.string());

  std::ifstream in(dir / "report.json");
  std::stringstream ss;
  ss << in.rdbuf();
  const auto j = nlohmann::json::parse(ss.str());
  EXPECT_EQ(j.at("schema"), 1);
  EXPECT_EQ(j.at("runs").size(), 3u);
  EXPECT_EQ(j.at("pass").get<bool>(), report.pass());
  const auto cfg_back = config_from_json(j.at("config").dump());
  EXPECT_EQ(config_to_json(cfg_back), config_to_json(c));

  for (const auto& run : report.runs) {
    const auto table = read_trace_csv((dir / "traces" / (std::string(to_string(run.kind)) + ".csv")).string());
    ASSERT_EQ(table.rows(), run.trajectory.size());
    EXPECT_EQ(table.column("dist_sq").back(), run.trajectory.observables.back().dist_sq);
    for (const auto& cert : run.certificates) {
      if (cert.report.detail_rows.empty()) continue;
      EXPECT_TRUE(fs::exists(cert.report.details_path));
      const auto back = report_from_json(report_to_json(cert.report));
      EXPECT_EQ(back.fitted, cert.report.fitted);
    }
  }
  const auto base = read_trace_csv((dir / "traces" / "baseline_fb.csv").string());
  EXPECT_EQ(base.header, (std::vector<std::string>{"k", "t", "objective_gap", "dist_sq"}));
  fs::remove_all(dir);
}

TEST(Names, RoundTrip) {
  for (auto e : {ExampleKind::LassoL1, ExampleKind::BoxQP, ExampleKind::LogisticL1})
    EXPECT_EQ(example_kind_from_string(to_string(e)), e);
  for (auto b : {BaselineKind::DiscreteFb, BaselineKind::DiscreteDr})
    EXPECT_EQ(baseline_kind_from_string(to_string(b)), b);
  EXPECT_THROW((void)baseline_kind_from_string("admm"), InvalidInput);
}
