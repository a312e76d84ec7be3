#include "accsplit/dynamics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "accsplit/errors.hpp"

namespace accsplit {

const char* to_string(DynamicsKind kind) {
  switch (kind) {
    case DynamicsKind::FbFlow: return "fb_flow";
    case DynamicsKind::DrFlow: return "dr_flow";
    case DynamicsKind::AccFb: return "acc_fb";
    case DynamicsKind::AccDr: return "acc_dr";
  }
  return "unknown";
}

DynamicsKind dynamics_kind_from_string(const std::string& name) {
  if (name == "fb_flow") return DynamicsKind::FbFlow;
  if (name == "dr_flow") return DynamicsKind::DrFlow;
  if (name == "acc_fb") return DynamicsKind::AccFb;
  if (name == "acc_dr") return DynamicsKind::AccDr;
  throw InvalidInput("unknown dynamics '" + name + "'");
}

void DynamicsSpec::validate() const {
  require_envelope_mu(mu, problem.L());
  if (is_douglas_rachford(kind) && !problem.f().has_prox()) {
    throw UnsupportedOperation(std::string(to_string(kind)) + " needs prox of the smooth part");
  }
  if (kind == DynamicsKind::AccFb && schedule.mode() == ScheduleMode::StronglyConvexConstant &&
      problem.f().as_quadratic() == nullptr) {
    const auto v = schedule.at(0.0);
    const double bound = std::sqrt(v.gamma * v.beta) / (2.0 * problem.L());
    if (mu > bound * (1.0 + 1e-12)) {
      throw ParameterDomainError("non-quadratic f needs mu <= sqrt(gamma beta)/(2L) = " +
                                 std::to_string(bound));
    }
  }
}

VectorField::VectorField(DynamicsSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  if (is_douglas_rachford(spec_.kind)) {
    smooth_prox_.emplace(spec_.problem.f(), spec_.mu);
  }
}

Vector VectorField::primal(const Vector& position) const {
  return smooth_prox_ ? (*smooth_prox_)(position) : position;
}

Vector VectorField::delta(const Vector& y) const {
  const Vector x = primal(y);
  const Vector shifted = x - spec_.mu * spec_.problem.f().gradient(x);
  if (!shifted.allFinite()) {
    return Vector::Constant(x.size(), std::numeric_limits<double>::quiet_NaN());
  }
  return (x - prox_g(spec_.problem.g(), shifted, spec_.mu)) / spec_.mu;
}

Vector VectorField::operator()(double t, const Vector& psi) const {
  if (psi.size() != state_dimension()) {
    throw InvalidInput("state has wrong dimension for this vector field");
  }
  if (!psi.allFinite()) {
    return Vector::Constant(psi.size(), std::numeric_limits<double>::quiet_NaN());
  }
  const double alpha = spec_.schedule.alpha();
  if (!is_accelerated(spec_.kind)) {
    return -alpha * delta(psi);
  }
  const Index n = dimension();
  const auto pos = psi.head(n);
  const auto vel = psi.tail(n);
  const auto par = spec_.schedule.at(t);
  Vector out(2 * n);
  out.head(n) = vel;
  out.tail(n) = -par.gamma * vel - alpha * delta(pos + par.beta * vel);
  return out;
}

Vector vector_field(const DynamicsSpec& spec, double t, const Vector& psi) {
  return VectorField(spec)(t, psi);
}

Vector discrete_fb_step(const CompositeProblem& problem, const Vector& x, double alpha_bar,
                        double mu) {
  if (!(alpha_bar > 0.0)) {
    throw ParameterDomainError("FB step size must be positive");
  }
  return x - alpha_bar * generalized_gradient(problem, x, mu);
}

Vector discrete_dr_step(const CompositeProblem& problem, const SmoothProx& prox, const Vector& z) {
  require_envelope_mu(prox.mu(), problem.L());
  const Vector x = prox(z);
  return z - x + problem.g().prox(2.0 * x - z, prox.mu());
}

Vector discrete_dr_step(const CompositeProblem& problem, const Vector& z, double mu) {
  require_envelope_mu(mu, problem.L());
  return discrete_dr_step(problem, SmoothProx(problem.f(), mu), z);
}

}  // namespace accsplit
