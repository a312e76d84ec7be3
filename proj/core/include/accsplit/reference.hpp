#pragma once

#include "accsplit/problems.hpp"
#include "accsplit/trajectory.hpp"

namespace accsplit {

struct ReferenceOptions {
  /// Target for ||G_mu(x*)||.
  double tolerance = 1e-12;
  std::size_t max_iterations = 100'000;
};

struct ReferenceSolution {
  Reference reference;
  /// ||G_mu(x*)|| actually reached.
  double residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// High-accuracy minimizer of F via proximal gradient steps with Nesterov
/// momentum and gradient-based restart, finished with plain proximal
/// gradient steps. Stops at ||G_mu|| <= tolerance or when progress stalls.
[[nodiscard]] ReferenceSolution solve_reference(const CompositeProblem& problem, double mu,
                                                const ReferenceOptions& options = {});

/// z* with prox_{mu f}(z*) = x*, i.e. z* = x* + mu grad f(x*).
[[nodiscard]] Vector dr_fixed_point(const CompositeProblem& problem, const Vector& x_star, double mu);

}  // namespace accsplit
