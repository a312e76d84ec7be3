#include "accsplit/certificates.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "accsplit/errors.hpp"
#include "accsplit/trajectory.hpp"

namespace accsplit {

const char* to_string(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::SublinearFit: return "sublinear_fit";
    case CertificateKind::ExponentialFit: return "exponential_fit";
    case CertificateKind::Lemma3: return "lemma3";
    case CertificateKind::Conditions: return "conditions";
    case CertificateKind::HCurve: return "hcurve";
    case CertificateKind::LyapunovDecay: return "lyapunov_decay";
    case CertificateKind::Gronwall: return "gronwall";
  }
  return "unknown";
}

CertificateKind certificate_kind_from_string(std::string_view name) {
  for (auto k : {CertificateKind::SublinearFit, CertificateKind::ExponentialFit, CertificateKind::Lemma3,
                 CertificateKind::Conditions, CertificateKind::HCurve, CertificateKind::LyapunovDecay,
                 CertificateKind::Gronwall}) {
    if (name == to_string(k)) return k;
  }
  throw InvalidInput("unknown certificate kind '" + std::string(name) + "'");
}

namespace {

using nlohmann::json;

// JSON has no NaN/inf; encode non-finite numbers as strings.
json encode_number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double decode_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  throw InvalidInput("certificate json: bad number '" + s + "'");
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LineFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) {
    throw InvalidInput("rate fit: window holds a single distinct time");
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

constexpr double kFitFloor = 1e2 * std::numeric_limits<double>::epsilon();

struct WindowSeries {
  std::vector<double> t;
  std::vector<double> v;
};

WindowSeries select_window(const std::vector<double>& times, const std::vector<double>& values,
                           TimeWindow window) {
  if (times.size() != values.size()) {
    throw InvalidInput("rate fit: time and value series differ in length");
  }
  if (!(window.end > window.begin)) {
    throw InvalidInput("rate fit: window must have begin < end");
  }
  WindowSeries out;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < window.begin || times[i] > window.end) continue;
    if (!(values[i] >= kFitFloor) || !std::isfinite(values[i])) {
      throw WindowTooLate("rate fit: value " + format_double(values[i]) + " at t = " +
                          format_double(times[i]) + " is below the reliable floor");
    }
    out.t.push_back(times[i]);
    out.v.push_back(values[i]);
  }
  if (out.t.size() < 3) {
    throw InvalidInput("rate fit: fewer than 3 samples in the window");
  }
  return out;
}

}  // namespace

std::string report_to_json(const CertificateReport& r) {
  json j;
  j["kind"] = to_string(r.kind);
  j["pass"] = r.pass;
  j["fitted"] = encode_number(r.fitted);
  j["theoretical"] = encode_number(r.theoretical);
  j["worst_slack"] = encode_number(r.worst_slack);
  j["n_samples"] = r.n_samples;
  j["details_path"] = r.details_path;
  j["fitted_constant"] = encode_number(r.fitted_constant);
  return j.dump(2);
}

CertificateReport report_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    CertificateReport r;
    r.kind = certificate_kind_from_string(j.at("kind").get<std::string>());
    r.pass = j.at("pass").get<bool>();
    r.fitted = decode_number(j.at("fitted"));
    r.theoretical = decode_number(j.at("theoretical"));
    r.worst_slack = decode_number(j.at("worst_slack"));
    r.n_samples = j.at("n_samples").get<std::size_t>();
    r.details_path = j.value("details_path", std::string());
    if (j.contains("fitted_constant")) r.fitted_constant = decode_number(j.at("fitted_constant"));
    return r;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("certificate json: ") + e.what());
  }
}

void write_details_csv(CertificateReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  for (std::size_t i = 0; i < report.detail_columns.size(); ++i) {
    out << (i ? "," : "") << report.detail_columns[i];
  }
  out << '\n';
  for (const auto& row : report.detail_rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << format_double(row[i]);
    }
    out << '\n';
  }
  report.details_path = path;
}

CertificateReport certify_sublinear(const std::vector<double>& times, const std::vector<double>& gaps,
                                    TimeWindow window) {
  const WindowSeries s = select_window(times, gaps, window);
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < s.t.size(); ++i) {
    lx.push_back(std::log(s.t[i] + 3.0));
    ly.push_back(std::log(s.v[i]));
  }
  const LineFit fit = least_squares(lx, ly);

  CertificateReport r;
  r.kind = CertificateKind::SublinearFit;
  r.fitted = fit.slope;
  r.theoretical = -2.0;
  r.worst_slack = kSublinearSlopeBound - fit.slope;
  r.pass = fit.slope <= kSublinearSlopeBound;
  r.n_samples = s.t.size();
  r.fitted_constant = std::exp(fit.intercept);
  r.detail_columns = {"t", "objective_gap", "fitted_gap"};
  for (std::size_t i = 0; i < s.t.size(); ++i) {
    r.detail_rows.push_back({s.t[i], s.v[i], std::exp(fit.intercept + fit.slope * lx[i])});
  }
  return r;
}

CertificateReport certify_exponential(const std::vector<double>& times, const std::vector<double>& dist_sq,
                                      double rho_theory, TimeWindow window) {
  if (!(rho_theory > 0.0)) {
    throw InvalidInput("exponential certificate needs a positive theoretical rate");
  }
  const WindowSeries s = select_window(times, dist_sq, window);
  std::vector<double> ly;
  for (double v : s.v) ly.push_back(std::log(v));
  const LineFit fit = least_squares(s.t, ly);

  CertificateReport r;
  r.kind = CertificateKind::ExponentialFit;
  r.fitted = -fit.slope;
  r.theoretical = rho_theory;
  r.worst_slack = r.fitted - kExponentialRateFraction * rho_theory;
  r.pass = r.fitted >= kExponentialRateFraction * rho_theory;
  r.n_samples = s.t.size();
  r.fitted_constant = std::exp(fit.intercept);
  r.detail_columns = {"t", "dist_sq", "fitted_dist_sq"};
  for (std::size_t i = 0; i < s.t.size(); ++i) {
    r.detail_rows.push_back({s.t[i], s.v[i], std::exp(fit.intercept + fit.slope * s.t[i])});
  }
  return r;
}

namespace {

template <class Field>
std::vector<double> observable_series(const Trajectory& traj, Field field) {
  std::vector<double> out;
  out.reserve(traj.size());
  for (const auto& o : traj.observables) out.push_back(o.*field);
  return out;
}

}  // namespace

CertificateReport certify_sublinear(const Trajectory& traj, TimeWindow window) {
  return certify_sublinear(traj.times, observable_series(traj, &SampleObservables::objective_gap), window);
}

CertificateReport certify_exponential(const Trajectory& traj, double rho_theory, TimeWindow window) {
  return certify_exponential(traj.times, observable_series(traj, &SampleObservables::dist_sq), rho_theory,
                             window);
}

}  // namespace accsplit
