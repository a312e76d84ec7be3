#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace accsplit {

struct Trajectory;

enum class CertificateKind { SublinearFit, ExponentialFit, Lemma3, Conditions, HCurve, LyapunovDecay, Gronwall };

[[nodiscard]] const char* to_string(CertificateKind kind);
[[nodiscard]] CertificateKind certificate_kind_from_string(std::string_view name);

/// Outcome of a rate fit or an inequality check. `worst_slack` is the
/// smallest margin (allowed minus observed) over all samples, so pass
/// implies worst_slack >= 0 for every kind except the tolerance-padded
/// checks, where it is the raw margin before padding.
struct CertificateReport {
  CertificateKind kind = CertificateKind::SublinearFit;
  bool pass = false;
  /// Fitted slope (sublinear), fitted decay rate (exponential), or the
  /// extreme observed value for inequality checks.
  double fitted = 0.0;
  double theoretical = 0.0;
  double worst_slack = 0.0;
  std::size_t n_samples = 0;
  /// Fitted multiplicative constant (c1, c2, c3) for rate fits.
  double fitted_constant = 0.0;
  std::string details_path;
  std::vector<std::string> detail_columns;
  std::vector<std::vector<double>> detail_rows;
};

/// {"kind","pass","fitted","theoretical","worst_slack","n_samples",
///  "details_path","fitted_constant"}; detail records are not embedded.
[[nodiscard]] std::string report_to_json(const CertificateReport& report);
[[nodiscard]] CertificateReport report_from_json(std::string_view text);

/// Writes the detail records as CSV and sets details_path.
void write_details_csv(CertificateReport& report, const std::string& path);

struct TimeWindow {
  double begin = 0.0;
  double end = 0.0;
};

/// Least-squares slope of log(gap) against log(t + 3) over the window; pass
/// iff slope <= -2 + 0.2. Throws WindowTooLate if a gap in the window is
/// below 1e2 * machine epsilon, InvalidInput if fewer than 3 samples fall in
/// the window.
[[nodiscard]] CertificateReport certify_sublinear(const std::vector<double>& times,
                                                  const std::vector<double>& gaps, TimeWindow window);

/// Least-squares slope of log(dist_sq) against t; pass iff the fitted decay
/// rate is at least 0.9 rho_theory.
[[nodiscard]] CertificateReport certify_exponential(const std::vector<double>& times,
                                                    const std::vector<double>& dist_sq,
                                                    double rho_theory, TimeWindow window);

/// Fits the trajectory's objective_gap observable.
[[nodiscard]] CertificateReport certify_sublinear(const Trajectory& traj, TimeWindow window);
/// Fits the trajectory's dist_sq observable.
[[nodiscard]] CertificateReport certify_exponential(const Trajectory& traj, double rho_theory,
                                                    TimeWindow window);

/// Threshold on the fitted log-log slope for the sublinear certificate.
inline constexpr double kSublinearSlopeBound = -2.0 + 0.2;
/// Fraction of the theoretical rate an exponential fit must reach.
inline constexpr double kExponentialRateFraction = 0.9;

}  // namespace accsplit
