#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "accsplit/certificates.hpp"
#include "accsplit/errors.hpp"
#include "accsplit/trajectory.hpp"

using namespace accsplit;

namespace {

std::vector<double> grid(double a, double b, double dt) {
  std::vector<double> t;
  for (double s = a; s <= b + 1e-12; s += dt) t.push_back(s);
  return t;
}

}  // namespace

TEST(CertifySublinear, RecoversPlantedExponent) {
  const auto t = grid(0.0, 200.0, 0.5);
  std::vector<double> gap;
  for (double s : t) gap.push_back(4.0 / ((s + 3.0) * (s + 3.0)));
  const auto r = certify_sublinear(t, gap, {10.0, 200.0});
  EXPECT_NEAR(r.fitted, -2.0, 1e-6);
  EXPECT_NEAR(r.fitted_constant, 4.0, 1e-6);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.kind, CertificateKind::SublinearFit);
  EXPECT_EQ(r.n_samples, 381u);
  EXPECT_NEAR(r.worst_slack, kSublinearSlopeBound + 2.0, 1e-6);
}

TEST(CertifySublinear, SlowRateFails) {
  const auto t = grid(0.0, 200.0, 0.5);
  std::vector<double> gap;
  for (double s : t) gap.push_back(1.0 / (s + 3.0));
  const auto r = certify_sublinear(t, gap, {10.0, 200.0});
  EXPECT_NEAR(r.fitted, -1.0, 1e-6);
  EXPECT_FALSE(r.pass);
  EXPECT_LT(r.worst_slack, 0.0);
}

TEST(CertifySublinear, Errors) {
  const auto t = grid(0.0, 10.0, 1.0);
  std::vector<double> tiny(t.size(), 1e-15);
  EXPECT_THROW((void)certify_sublinear(t, tiny, {0.0, 10.0}), WindowTooLate);
  std::vector<double> ok(t.size(), 1.0);
  EXPECT_THROW((void)certify_sublinear(t, ok, {4.5, 5.5}), InvalidInput);
  EXPECT_THROW((void)certify_sublinear(t, ok, {5.0, 2.0}), InvalidInput);
  EXPECT_THROW((void)certify_sublinear(t, std::vector<double>(3, 1.0), {0.0, 10.0}), InvalidInput);
}

TEST(CertifyExponential, RecoversPlantedRate) {
  const auto t = grid(0.0, 50.0, 0.25);
  std::vector<double> d;
  for (double s : t) d.push_back(3.0 * std::exp(-0.4 * s));
  const auto r = certify_exponential(t, d, 0.4, {5.0, 40.0});
  EXPECT_NEAR(r.fitted, 0.4, 1e-6);
  EXPECT_NEAR(r.fitted_constant, 3.0, 1e-6);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.worst_slack, 0.04, 1e-6);
}

TEST(CertifyExponential, ThresholdAndErrors) {
  const auto t = grid(0.0, 50.0, 0.25);
  std::vector<double> d;
  for (double s : t) d.push_back(std::exp(-0.35 * s));
  EXPECT_FALSE(certify_exponential(t, d, 0.4, {5.0, 40.0}).pass);  // 0.35 < 0.36
  EXPECT_TRUE(certify_exponential(t, d, 0.38, {5.0, 40.0}).pass);
  EXPECT_THROW((void)certify_exponential(t, d, 0.0, {5.0, 40.0}), InvalidInput);
  std::vector<double> fast;
  for (double s : t) fast.push_back(std::exp(-1.0 * s));  // below the fit floor past t ~ 31
  EXPECT_THROW((void)certify_exponential(t, fast, 0.4, {0.0, 50.0}), WindowTooLate);
}

TEST(CertificateReport, JsonRoundTrip) {
  CertificateReport r;
  r.kind = CertificateKind::HCurve;
  r.pass = true;
  r.fitted = -0.127563212345678;
  r.theoretical = 0.0;
  r.worst_slack = std::numeric_limits<double>::infinity();
  r.n_samples = 1000;
  r.fitted_constant = std::numeric_limits<double>::quiet_NaN();
  r.details_path = "out/hcurve.csv";
  const auto back = report_from_json(report_to_json(r));
  EXPECT_EQ(back.kind, r.kind);
  EXPECT_EQ(back.pass, r.pass);
  EXPECT_EQ(back.fitted, r.fitted);
  EXPECT_TRUE(std::isinf(back.worst_slack));
  EXPECT_TRUE(std::isnan(back.fitted_constant));
  EXPECT_EQ(back.n_samples, 1000u);
  EXPECT_EQ(back.details_path, r.details_path);
  EXPECT_EQ(report_to_json(back), report_to_json(r));
  EXPECT_THROW((void)report_from_json("{}"), InvalidInput);
}

TEST(CertificateReport, KindNames) {
  for (auto k : {CertificateKind::SublinearFit, CertificateKind::ExponentialFit, CertificateKind::Lemma3,
                 CertificateKind::Conditions, CertificateKind::HCurve, CertificateKind::LyapunovDecay,
                 CertificateKind::Gronwall}) {
    EXPECT_EQ(certificate_kind_from_string(to_string(k)), k);
  }
  EXPECT_THROW((void)certificate_kind_from_string("nope"), InvalidInput);
}

TEST(CertificateReport, DetailsCsvRoundTrip) {
  const auto t = grid(0.0, 20.0, 0.5);
  std::vector<double> d;
  for (double s : t) d.push_back(std::exp(-0.2 * s));
  auto r = certify_exponential(t, d, 0.2, {1.0, 19.0});
  const auto path = (std::filesystem::temp_directory_path() / "accsplit_cert_details.csv").string();
  write_details_csv(r, path);
  EXPECT_EQ(r.details_path, path);
  const auto table = read_trace_csv(path);
  EXPECT_EQ(table.header, r.detail_columns);
  ASSERT_EQ(table.rows(), r.detail_rows.size());
  for (std::size_t i = 0; i < table.rows(); ++i) EXPECT_EQ(table.column("dist_sq")[i], r.detail_rows[i][1]);
  std::filesystem::remove(path);
}
