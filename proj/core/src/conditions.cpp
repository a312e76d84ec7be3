#include "accsplit/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include "accsplit/envelopes.hpp"
#include "accsplit/errors.hpp"
#include "accsplit/reference.hpp"
#include "accsplit/trajectory.hpp"

namespace accsplit {

ConditionsResult check_conditions(double w, double muL, double beta, double gamma, double theta) {
  if (!(w >= 0.0 && w <= 1.0)) {
    throw ParameterDomainError("w must lie in [0, 1]");
  }
  if (!(muL >= 0.0 && muL < 1.0)) {
    throw ParameterDomainError("mu L must lie in [0, 1)");
  }
  ConditionsResult r;
  const double lhs = 1.0 - theta * beta;
  const double b = 1.0 - gamma * beta;
  // affine in mu sigma, so the two ends of [0, muL] settle it
  r.i = lhs >= b && lhs >= (1.0 - muL) * b;
  r.ii = theta * theta <= w * w;

  const double rhs = w * w * theta * beta * beta + 2.0 * gamma - 3.0 * theta;
  if (beta == 0.0) {
    r.iii = true;
    r.iii_residual = -rhs;
    return r;
  }
  const double gap = lhs - (1.0 - muL) * b;
  r.iii_residual = gap * gap / (2.0 * beta * (1.0 - muL)) - rhs;
  r.iii = r.iii_residual <= 0.0;
  return r;
}

ConstantParameters constant_parameters(double w) {
  if (!(w > 0.0 && w <= 1.0)) {
    throw ParameterDomainError("w must lie in (0, 1]");
  }
  ConstantParameters p;
  p.gamma = 2.0 * w / (w + 1.0);
  p.beta = 1.0 - p.gamma;
  p.theta = w - 0.5 * w * w;
  return p;
}

double iii_residual_scaled(double w, double c) {
  const auto p = constant_parameters(w);
  const double b = 1.0 - p.gamma * p.beta;
  const double muL = c * std::sqrt(p.gamma * p.beta);
  const double root = std::sqrt(p.beta) * (p.gamma - p.theta) + c * std::sqrt(p.gamma) * b;
  const double lhs = root * root / (2.0 * (1.0 - muL));
  const double rhs = w * w * p.theta * p.beta * p.beta + 2.0 * p.gamma - 3.0 * p.theta;
  return lhs - rhs;
}

double h_value(double w) { return iii_residual_scaled(w, 0.5) / w; }

std::vector<double> uniform_w_grid(std::size_t n) {
  std::vector<double> grid(n);
  for (std::size_t k = 0; k < n; ++k) {
    grid[k] = static_cast<double>(k + 1) / static_cast<double>(n);
  }
  return grid;
}

CertificateReport h_curve(const std::vector<double>& w_grid, MuLRule rule) {
  if (w_grid.empty()) {
    throw InvalidInput("h_curve needs a non-empty grid");
  }
  CertificateReport r;
  r.kind = CertificateKind::HCurve;
  r.pass = true;
  r.theoretical = 0.0;
  r.fitted = -std::numeric_limits<double>::infinity();
  r.worst_slack = std::numeric_limits<double>::infinity();
  r.detail_columns = {"w", "h", "wh_quarter", "wh_half"};
  for (double w : w_grid) {
    const auto p = constant_parameters(w);
    double h = 0.0;
    double wh_quarter = std::numeric_limits<double>::quiet_NaN();
    double wh_half = std::numeric_limits<double>::quiet_NaN();
    if (rule.kind == MuLRule::Kind::HalfSqrtGammaBeta) {
      wh_quarter = iii_residual_scaled(w, 0.25);
      wh_half = iii_residual_scaled(w, 0.5);
      h = wh_half / w;
      if (p.gamma * p.beta > 0.0 && !(wh_half > wh_quarter)) {
        r.pass = false;
      }
    } else {
      h = check_conditions(w, rule.value, p.beta, p.gamma, p.theta).iii_residual / w;
    }
    r.fitted = std::max(r.fitted, h);
    r.worst_slack = std::min(r.worst_slack, -h);
    r.detail_rows.push_back({w, h, wh_quarter, wh_half});
  }
  r.n_samples = w_grid.size();
  r.pass = r.pass && r.fitted <= 0.0;
  return r;
}

void write_hcurve_csv(const CertificateReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw InvalidInput("cannot open " + path + " for writing");
  }
  out << "w,h\n";
  for (const auto& row : report.detail_rows) {
    out << format_double(row.at(0)) << ',' << format_double(row.at(1)) << '\n';
  }
}

CertificateReport conditions_sweep(const std::vector<double>& w_grid) {
  if (w_grid.empty()) {
    throw InvalidInput("conditions sweep needs a non-empty grid");
  }
  CertificateReport r;
  r.kind = CertificateKind::Conditions;
  r.pass = true;
  r.fitted = -std::numeric_limits<double>::infinity();
  r.worst_slack = std::numeric_limits<double>::infinity();
  r.detail_columns = {"w", "i", "ii", "iii", "iii_residual"};
  for (double w : w_grid) {
    const auto p = constant_parameters(w);
    const double muL = 0.5 * std::sqrt(p.gamma * p.beta);
    const auto c = check_conditions(w, muL, p.beta, p.gamma, p.theta);
    r.pass = r.pass && c.i && c.ii && c.iii;
    r.fitted = std::max(r.fitted, c.iii_residual);
    r.worst_slack = std::min(r.worst_slack, -c.iii_residual);
    r.detail_rows.push_back({w, c.i ? 1.0 : 0.0, c.ii ? 1.0 : 0.0, c.iii ? 1.0 : 0.0, c.iii_residual});
  }
  r.n_samples = w_grid.size();
  return r;
}

namespace {

Vector into_domain(const NonsmoothFunction& g, Vector x) {
  if (const auto* box = std::get_if<BoxIndicator>(&g.kind())) {
    x = x.cwiseMax(box->lower).cwiseMin(box->upper);
  }
  return x;
}

}  // namespace

CertificateReport check_lemma3(const CompositeProblem& problem, double mu, std::size_t n_samples,
                               std::uint64_t seed) {
  if (!(problem.m() > 0.0)) {
    throw ParameterDomainError("envelope gap check needs a strongly convex smooth part (m > 0)");
  }
  require_envelope_mu(mu, problem.L());
  const auto ref = solve_reference(problem, mu);
  if (!(ref.residual <= 1e-10)) {
    throw ConsistencyError("reference solve did not reach ||G|| <= 1e-10");
  }
  return check_lemma3(problem, mu, n_samples, seed, ref.reference.x_star, ref.reference.F_star);
}

CertificateReport check_lemma3(const CompositeProblem& problem, double mu, std::size_t n_samples,
                               std::uint64_t seed, const Vector& x_star, double F_star) {
  if (!(problem.m() > 0.0)) {
    throw ParameterDomainError("envelope gap check needs a strongly convex smooth part (m > 0)");
  }
  require_envelope_mu(mu, problem.L());
  const Index n = problem.dimension();
  const double m = problem.m();
  const double L = problem.L();
  const double lower_coef = m * m * (1.0 - mu * L) / (2.0 * L);
  constexpr double kScales[] = {1e-3, 1e-1, 1.0, 10.0};

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto random_point = [&](double scale) {
    Vector u(n);
    for (Index j = 0; j < n; ++j) {
      u(j) = normal(rng);
    }
    const double radius = scale * (1.0 + x_star.norm()) * (1.0 - unit(rng));
    return Vector(x_star + radius * u / std::max(u.norm(), 1e-300));
  };

  CertificateReport r;
  r.kind = CertificateKind::Lemma3;
  r.theoretical = 0.0;
  r.fitted = std::numeric_limits<double>::infinity();
  r.worst_slack = std::numeric_limits<double>::infinity();
  r.detail_columns = {"scale", "margin_upper", "margin_lower", "slack"};
  for (std::size_t k = 0; k < n_samples; ++k) {
    const double scale = kScales[k % std::size(kScales)];
    const Vector x = k == 0 ? x_star : random_point(scale);
    const Vector xh = k == 0 ? x_star : into_domain(problem.g(), random_point(scale));

    const auto env = fb_envelope(problem, x, mu);
    const Vector& G = env.gen_grad;
    const Vector d = x - xh;
    const double upper = G.dot(d) - 0.5 * m * d.squaredNorm() - 0.5 * mu * G.squaredNorm();
    const double margin_upper = upper - (env.value - problem.objective(xh));
    const double margin_lower = (env.value - F_star) - lower_coef * (x - x_star).squaredNorm();
    const double slack = 1e-8 * (1.0 + std::abs(env.value));

    r.fitted = std::min({r.fitted, margin_upper, margin_lower});
    r.worst_slack = std::min({r.worst_slack, margin_upper + slack, margin_lower + slack});
    r.detail_rows.push_back({scale, margin_upper, margin_lower, slack});
  }
  r.n_samples = n_samples;
  r.pass = r.worst_slack >= 0.0;
  return r;
}

}  // namespace accsplit
