// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "accsplit/benchmark_runner.hpp"
#include "accsplit/conditions.hpp"
#include "accsplit/envelopes.hpp"
#include "accsplit/generators.hpp"
#include "accsplit/lyapunov.hpp"
#include "accsplit/reference.hpp"
#include "oracles.hpp"

using namespace accsplit;

namespace {

// pinned tolerances
constexpr double kRuntimeAc1 = 60.0;
constexpr double kRuntimeAc2 = 60.0;
constexpr double kRuntimeAc3 = 120.0;
constexpr double kCurvatureTol = 1e-6;
constexpr double kConstantsTol = 1e-12;
constexpr double kFdRelTol = 1e-5;
constexpr double kValueFormulaTol = 1e-10;
constexpr double kEquivalenceTol = 1e-6;
constexpr double kPiZeroTol = 1e-12;
constexpr double kPiNsdTol = 1e-10;

struct Outcome {
  bool pass = true;
  std::ostringstream note;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      note << " [" << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

const NamedCertificate* find_cert(const DynamicsRun& run, const std::string& name) {
  for (const auto& c : run.certificates) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

const DynamicsRun* find_run(const BenchmarkReport& r, DynamicsKind kind) {
  for (const auto& run : r.runs) {
    if (run.kind == kind) return &run;
  }
  return nullptr;
}

/// Requires the named certificate on the run to exist and pass; logs its fit.
void require_cert(Outcome& out, const BenchmarkReport& r, DynamicsKind kind, const std::string& name) {
  const DynamicsRun* run = find_run(r, kind);
  const NamedCertificate* c = run ? find_cert(*run, name) : nullptr;
  const std::string label = std::string(to_string(kind)) + "/" + name;
  if (c == nullptr) {
    out.require(false, label + " missing" + (run ? ": " + run->error : ""));
    return;
  }
  out.note << ' ' << label << '=' << c->report.fitted;
  if (c->report.kind == CertificateKind::ExponentialFit) out.note << "(need " << 0.9 * c->report.theoretical << ')';
  out.require(c->report.pass, label + " failed");
}

Outcome ac1() {
  Outcome out;
  const auto t0 = Clock::now();
  const auto r = run_benchmark(BenchmarkConfig::defaults(ExampleKind::LassoL1));
  require_cert(out, r, DynamicsKind::AccFb, "sublinear");
  require_cert(out, r, DynamicsKind::AccDr, "sublinear");
  require_cert(out, r, DynamicsKind::FbFlow, "sublinear_contrast");
  const double secs = seconds_since(t0);
  out.note << " runtime=" << secs << "s";
  out.require(secs <= kRuntimeAc1, "runtime");
  return out;
}

BenchmarkReport boxqp_report;

Outcome ac2() {
  Outcome out;
  const auto t0 = Clock::now();
  boxqp_report = run_benchmark(BenchmarkConfig::defaults(ExampleKind::BoxQP));
  require_cert(out, boxqp_report, DynamicsKind::AccFb, "exponential");
  require_cert(out, boxqp_report, DynamicsKind::AccDr, "exponential");
  const double secs = seconds_since(t0);
  out.note << " runtime=" << secs << "s";
  out.require(secs <= kRuntimeAc2, "runtime");
  return out;
}

Outcome ac3() {
  Outcome out;
  const auto t0 = Clock::now();
  BenchmarkConfig c = BenchmarkConfig::defaults(ExampleKind::LogisticL1);
  c.dynamics = {DynamicsKind::AccFb};
  c.baselines.clear();
  const auto gen = generate_problem(c);
  const double L = gen.problem.L();
  const auto sch = ParameterSchedule::strongly_convex(1.0 / L, gen.problem.m());
  c.alpha = 1.0 / L;
  c.mu = std::sqrt(sch.gamma(0.0) * sch.beta(0.0)) / (2.0 * L);
  const auto r = run_benchmark(c);
  require_cert(out, r, DynamicsKind::AccFb, "exponential");
  const double secs = seconds_since(t0);
  out.note << " kappa=" << L / gen.problem.m() << " runtime=" << secs << "s";
  out.require(secs <= kRuntimeAc3, "runtime");
  return out;
}

Outcome ac4() {
  Outcome out;
  // flows on the box QP of AC2 (mu = 1/(2L))
  require_cert(out, boxqp_report, DynamicsKind::FbFlow, "flow_exponential");
  require_cert(out, boxqp_report, DynamicsKind::DrFlow, "flow_exponential");
  // and on smaller, better conditioned box QPs
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    BenchmarkConfig c = BenchmarkConfig::defaults(ExampleKind::BoxQP);
    c.cols = 20;
    c.kappa = 20.0;
    c.seed = seed;
    c.t_end = 400.0;
    c.dynamics = {DynamicsKind::FbFlow, DynamicsKind::DrFlow};
    c.baselines.clear();
    const auto r = run_benchmark(c);
    require_cert(out, r, DynamicsKind::FbFlow, "flow_exponential");
    require_cert(out, r, DynamicsKind::DrFlow, "flow_exponential");
  }
  return out;
}

Outcome ac5() {
  Outcome out;
  std::size_t checked = 0;
  double worst = HUGE_VAL;
  for (auto ex : {ExampleKind::LassoL1, ExampleKind::BoxQP, ExampleKind::LogisticL1}) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      BenchmarkConfig c = BenchmarkConfig::defaults(ex);
      c.seed = seed;
      c.baselines.clear();
      c.dynamics = ex == ExampleKind::LogisticL1 ? std::vector<DynamicsKind>{DynamicsKind::AccFb}
                                                 : std::vector<DynamicsKind>{DynamicsKind::AccFb, DynamicsKind::AccDr};
      const auto r = run_benchmark(c);
      for (const auto& run : r.runs) {
        const auto* cert = find_cert(run, "lyapunov_decay");
        const std::string label = std::string(to_string(ex)) + "/seed" + std::to_string(seed) + "/" + to_string(run.kind);
        if (cert == nullptr) {
          out.require(false, label + " no Lyapunov record: " + run.error);
          continue;
        }
        ++checked;
        worst = std::min(worst, cert->report.worst_slack);
        out.require(cert->report.pass, label);
      }
    }
  }
  out.note << " trajectories=" << checked << " worst_slack=" << worst;
  return out;
}

Outcome ac6() {
  Outcome out;
  double worst = HUGE_VAL;
  std::size_t pairs = 0;
  for (std::uint64_t k = 0; k < 10; ++k) {
    CertificateReport r;
    if (k % 2 == 0) {
      const auto gen = gen_quadratic_l1(20, 1.0, 10.0, 0.5, 100 + k);
      r = check_lemma3(gen.problem, 0.05, 1000, 100 + k);
    } else {
      const auto gen = gen_logistic(30, 20, 0.1, LambdaRule::fraction_of_max(0.1), 100 + k);
      r = check_lemma3(gen.problem, 0.5 / gen.problem.L(), 1000, 100 + k);
    }
    pairs += r.n_samples;
    worst = std::min(worst, r.worst_slack);
    out.require(r.pass, "problem " + std::to_string(k));
  }
  out.note << " pairs=" << pairs << " worst_slack=" << worst;
  out.require(pairs == 10000, "pair count");
  return out;
}

Outcome ac7() {
  Outcome out;
  const auto fb = envelope_constants(1.0, 10.0, 0.05, EnvelopeKind::FB);
  out.require(std::abs(fb.L_env - 38.0) <= kConstantsTol && std::abs(fb.m_env - 0.95) <= kConstantsTol,
              "FB worked constants");
  const auto dr = envelope_constants(1.0, 10.0, 0.05, EnvelopeKind::DR);
  out.require(std::abs(dr.L_env - 0.95 / (0.05 * 1.1025)) <= kConstantsTol &&
                  std::abs(dr.m_env - std::min(0.95 / 1.1025, 5.0 / 2.25)) <= kConstantsTol,
              "DR worked constants");

  std::mt19937_64 rng(7);
  double lo = HUGE_VAL, hi = -HUGE_VAL;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto p = gen_quadratic_l1(10, 1.0, 10.0, 0.5, seed).problem;
    const double mu = 0.05;
    const SmoothProx prox(p.f(), mu);
    for (auto kind : {EnvelopeKind::FB, EnvelopeKind::DR}) {
      const auto c = envelope_constants(p.m(), p.L(), mu, kind);
      const auto value = [&](const Vector& x) {
        return kind == EnvelopeKind::FB ? fb_envelope(p, x, mu).value : dr_envelope(p, prox, x).value;
      };
      for (int k = 0; k < 200; ++k) {
        const Vector x = oracle::random_vector(p.dimension(), rng);
        const Vector d = oracle::random_unit(p.dimension(), rng);
        const double curv = oracle::second_difference(value, x, d, 1e-3);
        const double ratio_lo = curv - c.m_env, ratio_hi = curv - c.L_env;
        lo = std::min(lo, ratio_lo);
        hi = std::max(hi, ratio_hi);
        out.require(curv >= c.m_env - kCurvatureTol && curv <= c.L_env + kCurvatureTol, "curvature");
      }
    }
  }
  out.note << " min(curv-m~)=" << lo << " max(curv-L~)=" << hi;
  return out;
}

Outcome ac9() {
  Outcome out;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unit(0.05, 2.0);
  double worst_m = 0.0, worst_f = 0.0, worst_d = 0.0, worst_alt = 0.0;
  const auto g = NonsmoothFunction::l1(0.7);
  for (int k = 0; k < 100; ++k) {
    const double mu = unit(rng);
    const Vector v = oracle::random_vector(6, rng, 2.0);
    const Vector grad = moreau(g, v, mu).gradient;
    const Vector fd = oracle::fd_gradient([&](const Vector& y) { return moreau(g, y, mu).value; }, v);
    worst_m = std::max(worst_m, (grad - fd).norm() / std::max(1.0, grad.norm()));
  }
  const auto quad = gen_quadratic_l1(8, 1.0, 10.0, 0.5, 9).problem;
  const auto logi = gen_logistic(20, 8, 0.1, LambdaRule::fraction_of_max(0.2), 9).problem;
  for (const auto* p : {&quad, &logi}) {
    const double mu = 0.5 / p->L();
    for (int k = 0; k < 100; ++k) {
      const Vector x = oracle::random_vector(p->dimension(), rng, 2.0);
      const auto e = fb_envelope(*p, x, mu);
      const Vector fd = oracle::fd_gradient([&](const Vector& y) { return fb_envelope(*p, y, mu).value; }, x);
      worst_f = std::max(worst_f, (e.gradient - fd).norm() / std::max(1.0, e.gradient.norm()));
      worst_alt = std::max(worst_alt, std::abs(e.value - e.value_alt) / std::max(1.0, std::abs(e.value)));
    }
  }
  const SmoothProx prox(quad.f(), 0.05);
  for (int k = 0; k < 100; ++k) {
    const Vector z = oracle::random_vector(quad.dimension(), rng, 2.0);
    const auto e = dr_envelope(quad, prox, z);
    const Vector fd = oracle::fd_gradient([&](const Vector& y) { return dr_envelope(quad, prox, y).value; }, z);
    worst_d = std::max(worst_d, (e.gradient - fd).norm() / std::max(1.0, e.gradient.norm()));
  }
  out.note << " moreau=" << worst_m << " fb=" << worst_f << " dr=" << worst_d << " value_formulas=" << worst_alt;
  out.require(worst_m <= kFdRelTol, "moreau gradient");
  out.require(worst_f <= kFdRelTol, "FB gradient");
  out.require(worst_d <= kFdRelTol, "DR gradient");
  out.require(worst_alt <= kValueFormulaTol, "value formulas");
  return out;
}

Outcome ac10() {
  Outcome out;
  std::mt19937_64 rng(10);
  double worst_val = 0.0, worst_fb = 0.0, worst_dr = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto p = gen_quadratic_l1(10, 1.0, 10.0, 0.5, seed).problem;
    const double mu = 0.05;
    const auto ref = solve_reference(p, mu).reference;

    // minimize each envelope by gradient descent with step 1/L~
    const auto cfb = envelope_constants(p.m(), p.L(), mu, EnvelopeKind::FB);
    Vector x = Vector::Zero(p.dimension());
    for (int k = 0; k < 5000; ++k) x -= fb_envelope(p, x, mu).gradient / cfb.L_env;
    worst_val = std::max(worst_val, std::abs(fb_envelope(p, x, mu).value - ref.F_star));
    worst_fb = std::max(worst_fb, (x - ref.x_star).norm());

    const auto cdr = envelope_constants(p.m(), p.L(), mu, EnvelopeKind::DR);
    const SmoothProx prox(p.f(), mu);
    Vector z = Vector::Zero(p.dimension());
    for (int k = 0; k < 5000; ++k) z -= dr_envelope(p, prox, z).gradient / cdr.L_env;
    worst_dr = std::max(worst_dr, (prox(z) - ref.x_star).norm());

    for (int k = 0; k < 20; ++k) {
      const Vector y = oracle::random_vector(p.dimension(), rng, 3.0);
      const auto e = fb_envelope(p, y, mu);
      out.require(p.objective(e.prox_point) <= e.value + 1e-12 * (1.0 + std::abs(e.value)), "F(p) <= F_mu");
    }
  }
  out.note << " |minF_mu-F*|=" << worst_val << " |argminF_mu-x*|=" << worst_fb << " |prox(argminD)-x*|=" << worst_dr;
  out.require(worst_val <= kEquivalenceTol, "min values");
  out.require(worst_fb <= kEquivalenceTol, "FB minimizer");
  out.require(worst_dr <= kEquivalenceTol, "DR minimizer");
  return out;
}

Outcome ac8() {
  Outcome out;
  const auto r = h_curve(uniform_w_grid(1000));
  out.note << " max_h=" << r.fitted << " points=" << r.n_samples;
  out.require(r.pass, "h <= 0 and monotone in mu L");
  bool monotone = true;
  for (const auto& row : r.detail_rows) {
    if (row[0] < 1.0 && !(row[3] > row[2])) monotone = false;
  }
  out.require(monotone, "w h(w) increasing in mu L");
  return out;
}

Outcome ac11() {
  Outcome out;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_pi = 0.0, worst_eig = -HUGE_VAL;
  for (int k = 0; k < 100; ++k) {
    const double L = std::exp(4.0 * unit(rng));
    const double m = L * std::exp(-6.0 * unit(rng));
    const double mu = (0.05 + 0.9 * unit(rng)) / L;
    const auto kind = k % 2 == 0 ? EnvelopeKind::FB : EnvelopeKind::DR;
    const Matrix Q = oracle::random_spd(4, m, L, rng);
    const Matrix H = envelope_weight(QuadraticSmooth{Q, Vector::Zero(4)}, mu, kind);

    const auto convex = ParameterSchedule::convex(1.0 / L);
    const double t = 100.0 * unit(rng);
    worst_pi = std::max(worst_pi, certificate_pi_convex(H, convex, t).cwiseAbs().maxCoeff());

    const double m_env = envelope_constants(m, L, mu, kind).m_env;
    const double alpha = (0.01 + 0.99 * unit(rng)) / m_env;
    const Matrix M = certificate_pi_minus_upsilon(H, ParameterSchedule::strongly_convex(alpha, m_env), m_env);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (M + M.transpose()));
    worst_eig = std::max(worst_eig, eig.eigenvalues().maxCoeff());
  }
  out.note << " max|Pi|=" << worst_pi << " max eig(Pi-Upsilon)=" << worst_eig;
  out.require(worst_pi <= kPiZeroTol, "Pi == 0");
  out.require(worst_eig <= kPiNsdTol, "Pi - Upsilon <= 0");
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3},  {"AC4", ac4},   {"AC5", ac5},  {"AC6", ac6},
      {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10}, {"AC11", ac11},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note << " exception: " << e.what();
    }
    std::printf("%-4s %s%s\n", name, o.pass ? "PASS" : "FAIL", o.note.str().c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
