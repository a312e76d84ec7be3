#include "accsplit/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "accsplit/errors.hpp"
#include "accsplit/reference.hpp"

namespace accsplit {

const char* to_string(LyapunovCase c) {
  switch (c) {
    case LyapunovCase::QuadraticConvex: return "quadratic_convex";
    case LyapunovCase::QuadraticStronglyConvex: return "quadratic_strongly_convex";
    case LyapunovCase::GeneralStronglyConvex: return "general_strongly_convex";
  }
  return "unknown";
}

LyapunovSpec lyapunov_spec_for(const DynamicsSpec& dynamics, const std::optional<Reference>& reference) {
  if (!is_accelerated(dynamics.kind)) {
    throw UnsupportedOperation("Lyapunov certificates are defined for the accelerated dynamics");
  }
  LyapunovSpec spec;
  spec.envelope = envelope_of(dynamics.kind);
  spec.alpha = dynamics.schedule.alpha();
  spec.mu = dynamics.mu;
  spec.schedule = dynamics.schedule;

  if (const auto* quad = dynamics.problem.f().as_quadratic()) {
    spec.kind = dynamics.schedule.mode() == ScheduleMode::ConvexTimeVarying
                    ? LyapunovCase::QuadraticConvex
                    : LyapunovCase::QuadraticStronglyConvex;
    spec.H = envelope_weight(*quad, dynamics.mu, spec.envelope);
  } else {
    if (spec.envelope != EnvelopeKind::FB) {
      throw UnsupportedOperation("non-quadratic Lyapunov function is only defined for the FB envelope");
    }
    spec.kind = LyapunovCase::GeneralStronglyConvex;
  }

  if (reference) {
    spec.value_star = reference->F_star;
    spec.position_star = spec.envelope == EnvelopeKind::FB
                             ? reference->x_star
                             : dr_fixed_point(dynamics.problem, reference->x_star, dynamics.mu);
  }
  return spec;
}

LyapunovFunction::LyapunovFunction(LyapunovSpec spec, CompositeProblem problem)
    : spec_(std::move(spec)), problem_(std::move(problem)) {
  require_envelope_mu(spec_.mu, problem_.L());
  const Index n = problem_.dimension();
  if (spec_.kind != LyapunovCase::GeneralStronglyConvex && (spec_.H.rows() != n || spec_.H.cols() != n)) {
    throw InvalidInput("Lyapunov weight matrix must be n x n");
  }
  if (spec_.envelope == EnvelopeKind::DR) {
    prox_.emplace(problem_.f(), spec_.mu);
  }
}

double LyapunovFunction::envelope_value(const Vector& position) const {
  if (prox_) {
    return dr_envelope(problem_, *prox_, position).value;
  }
  return fb_envelope(problem_, position, spec_.mu).value;
}

Vector LyapunovFunction::delta_at(const Vector& y) const {
  if (prox_) {
    return generalized_gradient(problem_, (*prox_)(y), spec_.mu);
  }
  return generalized_gradient(problem_, y, spec_.mu);
}

double LyapunovFunction::operator()(double t, const Vector& psi) const {
  const Index n = problem_.dimension();
  if (psi.size() != 2 * n) {
    throw InvalidInput("Lyapunov state must have length 2n");
  }
  if (spec_.shift && (!spec_.position_star || !spec_.value_star)) {
    throw NeedsReference("Lyapunov shift requested but the optimal point/value are unknown");
  }
  const Vector pos = psi.head(n);
  const Vector vel = psi.tail(n);
  const Vector pos_rel = spec_.shift ? Vector(pos - *spec_.position_star) : pos;
  const double e_star = spec_.shift ? *spec_.value_star : 0.0;
  const auto par = spec_.schedule.at(t);
  const Vector w = par.theta * pos_rel + vel;

  if (spec_.kind == LyapunovCase::GeneralStronglyConvex) {
    const Vector y = pos + par.beta * vel;
    return spec_.alpha * (fb_envelope(problem_, y, spec_.mu).value - e_star) + 0.5 * w.squaredNorm();
  }
  return spec_.alpha * (envelope_value(pos) - e_star) + 0.5 * w.dot(spec_.H * w);
}

double lyapunov_value(const LyapunovFunction& V, double t, const Vector& psi) { return V(t, psi); }

namespace {

std::vector<double> lyapunov_series(const Trajectory& traj, const LyapunovFunction& V) {
  std::vector<double> out;
  out.reserve(traj.size());
  bool recorded = !traj.observables.empty();
  for (const auto& o : traj.observables) {
    if (!std::isfinite(o.lyapunov)) {
      recorded = false;
      break;
    }
  }
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out.push_back(recorded ? traj.observables[k].lyapunov : V(traj.times[k], traj.state(k)));
  }
  return out;
}

}  // namespace

CertificateReport check_lyapunov_decay(const Trajectory& traj, const LyapunovFunction& V) {
  constexpr double kTolerance = 1e-4;
  if (traj.size() < 3) {
    throw InvalidInput("Lyapunov decay check needs at least 3 samples");
  }
  const std::vector<double> values = lyapunov_series(traj, V);

  CertificateReport r;
  r.kind = CertificateKind::LyapunovDecay;
  r.theoretical = 0.0;
  r.fitted = -std::numeric_limits<double>::infinity();
  r.worst_slack = std::numeric_limits<double>::infinity();
  r.detail_columns = {"t", "V", "V_dot", "V_dot_plus_theta_V"};
  for (std::size_t k = 1; k + 1 < traj.size(); ++k) {
    const double dt = traj.times[k + 1] - traj.times[k - 1];
    const double v_dot = (values[k + 1] - values[k - 1]) / dt;
    const double residual = v_dot + V.theta(traj.times[k]) * values[k];
    const double slack = kTolerance * (1.0 + values[k]) - residual;
    r.fitted = std::max(r.fitted, residual);
    r.worst_slack = std::min(r.worst_slack, slack);
    r.detail_rows.push_back({traj.times[k], values[k], v_dot, residual});
  }
  r.n_samples = r.detail_rows.size();
  r.pass = r.worst_slack >= 0.0;
  return r;
}

CertificateReport check_gronwall(const Trajectory& traj, const LyapunovFunction& V) {
  if (traj.size() < 2) {
    throw InvalidInput("Gronwall check needs at least 2 samples");
  }
  const std::vector<double> values = lyapunov_series(traj, V);
  const double v0 = values.front();
  const double t0 = traj.times.front();
  const double floor = 1e-13 * (1.0 + std::abs(v0));

  CertificateReport r;
  r.kind = CertificateKind::Gronwall;
  r.worst_slack = std::numeric_limits<double>::infinity();
  r.fitted = 0.0;
  r.theoretical = 1.0;
  r.detail_columns = {"t", "V", "bound"};
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double bound = v0 * std::exp(-V.spec().schedule.theta_integral(t0, traj.times[k]));
    const double slack = 1.05 * bound + floor - values[k];
    r.worst_slack = std::min(r.worst_slack, slack);
    if (bound > 0.0) {
      r.fitted = std::max(r.fitted, values[k] / bound);
    }
    r.detail_rows.push_back({traj.times[k], values[k], bound});
  }
  r.n_samples = traj.size();
  r.pass = r.worst_slack >= 0.0;
  return r;
}

double monotonicity_product(const LyapunovFunction& V, double t, const Vector& psi) {
  const auto& spec = V.spec();
  const Index n = psi.size() / 2;
  const Matrix H = spec.kind == LyapunovCase::GeneralStronglyConvex ? Matrix::Identity(n, n) : spec.H;
  const Vector pos = psi.head(n);
  const Vector vel = psi.tail(n);
  const double beta = spec.schedule.beta(t);
  return beta * vel.dot(H * (V.delta_at(pos + beta * vel) - V.delta_at(pos)));
}

namespace {

Matrix stack(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

}  // namespace

Matrix certificate_pi_convex(const Matrix& H, const ParameterSchedule& schedule, double t) {
  const Index n = H.rows();
  const Matrix I = Matrix::Identity(n, n);
  const Matrix Z = Matrix::Zero(n, n);
  const auto par = schedule.at(t);
  const double theta_dot = schedule.theta_dot(t);

  Matrix A(2 * n, 2 * n);
  A << Z, I, Z, -par.gamma * I;
  const Matrix R = stack(par.theta * I, I);
  const Matrix R_dot = stack(theta_dot * I, Z);
  const Matrix P = R.transpose() * H * R;
  const Matrix P_dot = R_dot.transpose() * H * R + R.transpose() * H * R_dot;
  return A.transpose() * P + P * A + par.theta * P + P_dot;
}

Matrix certificate_pi_minus_upsilon(const Matrix& H, const ParameterSchedule& schedule, double m_env) {
  const Index n = H.rows();
  const Matrix I = Matrix::Identity(n, n);
  const Matrix Z = Matrix::Zero(n, n);
  const auto par = schedule.at(0.0);
  const double alpha = schedule.alpha();

  Matrix A(2 * n, 2 * n);
  A << Z, I, Z, -par.gamma * I;
  const Matrix R = stack(par.theta * I, I);
  const Matrix C = stack(I, par.beta * I);
  const Matrix C2 = stack(Z, par.beta * I);
  const Matrix P = R.transpose() * H * R;
  const Matrix C2HC2 = C2.transpose() * H * C2;

  const Matrix Pi = A.transpose() * P + P * A + par.theta * P -
                    alpha * m_env * par.theta * (C.transpose() * H * C + C2HC2);
  Matrix Upsilon = Matrix::Zero(2 * n, 2 * n);
  if (par.beta > 0.0) {
    Upsilon = (2.0 * alpha * m_env / par.beta) * (1.0 - par.theta * par.beta) * C2HC2;
  }
  return Pi - Upsilon;
}

}  // namespace accsplit
