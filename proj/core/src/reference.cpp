#include "accsplit/reference.hpp"

#include <algorithm>
#include <cmath>

#include "accsplit/envelopes.hpp"

namespace accsplit {

ReferenceSolution solve_reference(const CompositeProblem& problem, double mu,
                                  const ReferenceOptions& options) {
  require_envelope_mu(mu, problem.L());
  const Index n = problem.dimension();
  const double step = problem.L() > 0.0 ? 1.0 / problem.L() : mu;
  const auto& f = problem.f();
  const auto& g = problem.g();

  auto pg_step = [&](const Vector& y, double s) { return g.prox(y - s * f.gradient(y), s); };

  ReferenceSolution out;
  Vector x = Vector::Zero(n);
  Vector x_prev = x;
  Vector y = x;
  double t = 1.0;
  double best = HUGE_VAL;
  Vector best_x = x;
  std::size_t since_improvement = 0;

  std::size_t it = 0;
  for (; it < options.max_iterations; ++it) {
    x_prev = x;
    x = pg_step(y, step);
    // restart when the momentum direction opposes the gradient mapping
    if ((y - x).dot(x - x_prev) > 0.0) {
      t = 1.0;
      y = x;
    } else {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      y = x + ((t - 1.0) / t_next) * (x - x_prev);
      t = t_next;
    }
    if (it % 10 == 0) {
      const double r = generalized_gradient(problem, x, mu).norm();
      if (r < best) {
        best = r;
        best_x = x;
        since_improvement = 0;
      } else {
        since_improvement += 10;
      }
      if (r <= options.tolerance || since_improvement > 5000) {
        break;
      }
    }
  }

  // polish with plain proximal gradient steps at the envelope penalty
  x = best_x;
  for (int k = 0; k < 200; ++k) {
    const Vector next = pg_step(x, mu);
    const double r = generalized_gradient(problem, next, mu).norm();
    if (r < best) {
      best = r;
      best_x = next;
    }
    x = next;
  }

  out.reference.x_star = best_x;
  out.reference.F_star = problem.objective(best_x);
  out.residual = best;
  out.iterations = it;
  out.converged = best <= options.tolerance;
  return out;
}

Vector dr_fixed_point(const CompositeProblem& problem, const Vector& x_star, double mu) {
  return x_star + mu * problem.f().gradient(x_star);
}

}  // namespace accsplit
