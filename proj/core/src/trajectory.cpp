#include "accsplit/trajectory.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "accsplit/errors.hpp"

namespace accsplit {

Vector Trajectory::state(std::size_t i) const {
  const Vector& pos = positions.at(i);
  const Vector& vel = velocities.at(i);
  if (vel.size() == 0) {
    return pos;
  }
  Vector psi(pos.size() + vel.size());
  psi << pos, vel;
  return psi;
}

Vector zero_state(const DynamicsSpec& spec) {
  const Index n = spec.problem.dimension();
  return Vector::Zero(is_accelerated(spec.kind) ? 2 * n : n);
}

Trajectory integrate(const DynamicsSpec& spec, const Vector& psi0, double t_end, double tol,
                     double sample_dt, const IntegrateOptions& options) {
  if (!(tol >= 1e-12) || !(tol <= 1e-3)) {
    throw ParameterDomainError("integration tolerance must lie in [1e-12, 1e-3]");
  }
  if (!(t_end > 0.0)) {
    throw ParameterDomainError("t_end must be positive");
  }
  const VectorField field(spec);
  if (psi0.size() != field.state_dimension()) {
    throw InvalidInput("initial state has wrong dimension");
  }
  const Index n = field.dimension();
  const bool accel = is_accelerated(spec.kind);
  const auto* sprox = field.smooth_prox();

  Trajectory traj;
  traj.kind = spec.kind;
  traj.dimension = n;

  int quiet_samples = 0;
  auto on_sample = [&](double t, const Vector& psi) -> bool {
    if (!psi.allFinite()) {
      throw StepUnderflow("state became non-finite", t);
    }
    Vector pos = psi.head(n);
    Vector vel = accel ? Vector(psi.tail(n)) : Vector();
    Vector x = field.primal(pos);

    SampleObservables obs;
    if (options.record_objective) {
      const EnvelopeEval env = sprox ? dr_envelope(spec.problem, *sprox, pos)
                                     : fb_envelope(spec.problem, x, spec.mu);
      obs.envelope = env.value;
      obs.objective_gap = spec.problem.objective(env.prox_point);
      if (options.reference) {
        obs.objective_gap -= options.reference->F_star;
      }
    }
    if (options.reference) {
      obs.dist_sq = (x - options.reference->x_star).squaredNorm();
    }
    if (options.lyapunov) {
      obs.lyapunov = options.lyapunov(t, psi);
    }

    traj.times.push_back(t);
    traj.positions.push_back(std::move(pos));
    traj.velocities.push_back(std::move(vel));
    traj.primal.push_back(std::move(x));
    traj.observables.push_back(obs);

    if (options.stop_at_equilibrium) {
      const double rate = field(t, psi).norm();
      quiet_samples = rate <= 1e-12 * (1.0 + psi.norm()) ? quiet_samples + 1 : 0;
      if (quiet_samples >= 5) {
        traj.stopped_at_equilibrium = true;
        return false;
      }
    }
    return true;
  };

  IntegratorOptions iopts = options.integrator;
  iopts.rtol = tol;
  iopts.atol = tol;
  try {
    traj.stats = integrate_ode([&field](double t, const Vector& y) { return field(t, y); }, 0.0,
                               psi0, t_end, sample_dt, iopts, on_sample);
  } catch (const StepUnderflow& e) {
    throw IntegrationFailure(e.what(), std::move(traj));
  }
  return traj;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17e", v);
  return buf;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  const Index n = traj.dimension;
  const bool dr = is_douglas_rachford(traj.kind);
  const bool accel = is_accelerated(traj.kind);
  out << "t";
  for (Index i = 1; i <= n; ++i) out << ",x_" << i;
  if (dr) {
    for (Index i = 1; i <= n; ++i) out << ",z_" << i;
  }
  if (accel) {
    for (Index i = 1; i <= n; ++i) out << ",v_" << i;
  }
  out << ",objective_gap,dist_sq,lyapunov\n";

  for (std::size_t k = 0; k < traj.size(); ++k) {
    out << format_double(traj.times[k]);
    for (Index i = 0; i < n; ++i) out << ',' << format_double(traj.primal[k][i]);
    if (dr) {
      for (Index i = 0; i < n; ++i) out << ',' << format_double(traj.positions[k][i]);
    }
    if (accel) {
      for (Index i = 0; i < n; ++i) out << ',' << format_double(traj.velocities[k][i]);
    }
    const auto& o = traj.observables[k];
    out << ',' << format_double(o.objective_gap) << ',' << format_double(o.dist_sq) << ','
        << format_double(o.lyapunov) << '\n';
  }
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  write_trajectory_csv(traj, out);
}

bool TraceTable::has(const std::string& name) const {
  for (const auto& h : header) {
    if (h == name) return true;
  }
  return false;
}

const std::vector<double>& TraceTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return columns[i];
  }
  throw InvalidInput("trace has no column '" + name + "'");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    cells.push_back(cell);
  }
  return cells;
}

}  // namespace

TraceTable read_trace_csv(std::istream& in) {
  TraceTable table;
  std::string line;
  if (!std::getline(in, line)) {
    throw InvalidInput("trace csv is empty");
  }
  table.header = split_csv_line(line);
  table.columns.resize(table.header.size());
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != table.header.size()) {
      throw InvalidInput("trace csv row " + std::to_string(row) + " has " +
                         std::to_string(cells.size()) + " cells, expected " +
                         std::to_string(table.header.size()));
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      char* end = nullptr;
      const double v = std::strtod(cells[i].c_str(), &end);
      if (end == cells[i].c_str() || *end != '\0') {
        throw InvalidInput("trace csv row " + std::to_string(row) + ": bad number '" + cells[i] + "'");
      }
      table.columns[i].push_back(v);
    }
  }
  return table;
}

TraceTable read_trace_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read " + path);
  }
  return read_trace_csv(in);
}

}  // namespace accsplit
