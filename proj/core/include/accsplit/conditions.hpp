#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "accsplit/certificates.hpp"
#include "accsplit/problems.hpp"

namespace accsplit {

/// Verdicts of the three negative-semidefiniteness conditions for the
/// constant-parameter accelerated FB dynamics.
struct ConditionsResult {
  bool i = false;
  bool ii = false;
  bool iii = false;
  /// Condition (iii) holds iff this is <= 0.
  double iii_residual = 0.0;
};

/// (i)   1 - theta beta >= (1 - mu sigma)(1 - gamma beta), checked at
///       mu sigma in {0, muL}
/// (ii)  theta^2 <= w^2
/// (iii) ((1 - theta beta) - (1 - muL)(1 - gamma beta))^2 / (2 beta (1 - muL))
///       - (w^2 theta beta^2 + 2 gamma - 3 theta) <= 0
/// At beta = 0 (iii) passes and the residual is -(w^2 theta beta^2 + 2 gamma - 3 theta).
[[nodiscard]] ConditionsResult check_conditions(double w, double muL, double beta, double gamma,
                                                double theta);

/// Parameters of the constant schedule for w = sqrt(alpha m).
struct ConstantParameters {
  double gamma = 0.0;
  double beta = 0.0;
  double theta = 0.0;
};
[[nodiscard]] ConstantParameters constant_parameters(double w);

/// Residual of (iii) with muL = c sqrt(gamma beta), written so that the
/// beta factor cancels; finite at beta = 0.
[[nodiscard]] double iii_residual_scaled(double w, double c);

/// h(w) = iii_residual(w) / w with muL = sqrt(gamma beta)/2.
[[nodiscard]] double h_value(double w);

struct MuLRule {
  enum class Kind { HalfSqrtGammaBeta, Fixed };
  Kind kind = Kind::HalfSqrtGammaBeta;
  double value = 0.0;

  static MuLRule half_sqrt_gamma_beta() { return {}; }
  static MuLRule fixed(double v) { return {Kind::Fixed, v}; }
};

/// Evaluates h on the grid. Passes iff h <= 0 everywhere and, for the
/// HalfSqrtGammaBeta rule, w h(w) strictly increases when muL goes from
/// sqrt(gamma beta)/4 to sqrt(gamma beta)/2 at every grid point with
/// gamma beta > 0. Detail columns: w, h, wh_quarter, wh_half.
[[nodiscard]] CertificateReport h_curve(const std::vector<double>& w_grid, MuLRule rule = {});

/// {k/N : k = 1..N}.
[[nodiscard]] std::vector<double> uniform_w_grid(std::size_t n);

/// Writes the (w, h) pairs only.
void write_hcurve_csv(const CertificateReport& report, const std::string& path);

/// Runs check_conditions with the constant schedule on the grid and
/// muL = sqrt(gamma beta)/2. Detail columns: w, i, ii, iii, iii_residual.
[[nodiscard]] CertificateReport conditions_sweep(const std::vector<double>& w_grid);

/// Checks both strong-convexity substitutes for the FB envelope on random
/// pairs around x*:
///   F_mu(x) - F(xh) <= <G(x), x - xh> - m/2 |x - xh|^2 - mu/2 |G(x)|^2
///   F_mu(x) - F*    >= m^2 (1 - mu L)/(2L) |x - x*|^2
/// each with slack 1e-8 (1 + |F_mu(x)|). Throws ParameterDomainError when
/// m = 0 and ConsistencyError when x* cannot be resolved to ||G|| <= 1e-10.
[[nodiscard]] CertificateReport check_lemma3(const CompositeProblem& problem, double mu,
                                             std::size_t n_samples, std::uint64_t seed);

/// Same check against a caller-supplied minimizer.
[[nodiscard]] CertificateReport check_lemma3(const CompositeProblem& problem, double mu,
                                             std::size_t n_samples, std::uint64_t seed,
                                             const Vector& x_star, double F_star);

}  // namespace accsplit
