#include <benchmark/benchmark.h>

#include "accsplit/dynamics.hpp"
#include "accsplit/envelopes.hpp"
#include "accsplit/generators.hpp"
#include "accsplit/trajectory.hpp"

using namespace accsplit;

namespace {

GeneratedProblem lasso(benchmark::State& state) {
  const auto n = static_cast<Index>(state.range(0));
  return gen_lasso(n / 5, n, LambdaRule::fraction_of_max(0.1), 1);
}

void BM_FbEnvelope(benchmark::State& state) {
  const auto gen = lasso(state);
  const double mu = 0.5 / gen.problem.L();
  const Vector x = Vector::Constant(gen.problem.dimension(), 0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fb_envelope(gen.problem, x, mu));
  }
}
BENCHMARK(BM_FbEnvelope)->Arg(100)->Arg(500)->Arg(2000);

void BM_DrEnvelope(benchmark::State& state) {
  const auto gen = lasso(state);
  const double mu = 0.5 / gen.problem.L();
  const SmoothProx prox(gen.problem.f(), mu);
  const Vector z = Vector::Constant(gen.problem.dimension(), 0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dr_envelope(gen.problem, prox, z));
  }
}
BENCHMARK(BM_DrEnvelope)->Arg(100)->Arg(500);

void BM_AccFbField(benchmark::State& state) {
  const auto gen = lasso(state);
  const double L = gen.problem.L();
  const VectorField field(DynamicsSpec{DynamicsKind::AccFb, gen.problem, 0.5 / L, ParameterSchedule::convex(1.0 / L)});
  const Vector psi = Vector::Constant(2 * gen.problem.dimension(), 0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(field(1.0, psi));
  }
}
BENCHMARK(BM_AccFbField)->Arg(100)->Arg(500)->Arg(2000);

void BM_IntegrateBoxQp(benchmark::State& state) {
  const auto gen = gen_boxqp(static_cast<Index>(state.range(0)), 100.0, 3);
  const double L = gen.problem.L();
  const double m_env = envelope_constants(gen.problem.m(), L, 0.5 / L, EnvelopeKind::FB).m_env;
  const DynamicsSpec spec{DynamicsKind::AccFb, gen.problem, 0.5 / L, schedule_strongly_convex(1.0 / L, m_env)};
  IntegrateOptions opts;
  opts.record_objective = false;
  opts.stop_at_equilibrium = false;
  for (auto _ : state) {
    const auto traj = integrate(spec, zero_state(spec), 50.0, 1e-9, 1.0, opts);
    state.counters["steps"] = static_cast<double>(traj.stats.accepted);
  }
}
BENCHMARK(BM_IntegrateBoxQp)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
