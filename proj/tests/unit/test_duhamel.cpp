#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "cnsdecay/duhamel.hpp"
#include "cnsdecay/errors.hpp"
#include "oracles.hpp"

using namespace cnsdecay;

namespace {

constexpr double kPi = std::numbers::pi;

SolverConfig config(double dt, double t_end, int every = 1) {
  SolverConfig c;
  c.dt = dt;
  c.t_end = t_end;
  c.record_every = every;
  return c;
}

PerturbationState scaled(const PerturbationState& s, double eps) {
  PerturbationState out = s;
  for (auto& c : out.rho_hat()) c *= eps;
  for (auto& f : out.m_hat())
    for (auto& c : f) c *= eps;
  return out;
}

// Rows following prescribed power laws in (1 + t).
DifferenceSeries synthetic(double diff_exp, double lin_exp, double full_exp) {
  DifferenceSeries s;
  for (double t : log_spaced_times(1.0, 1e3, 40)) {
    DifferenceRow r;
    r.t = t;
    r.diff_rho = 0.3 * std::pow(1 + t, diff_exp);
    r.diff_m = 0.1 * std::pow(1 + t, diff_exp);
    r.lin_rho = 2.0 * std::pow(1 + t, lin_exp);
    r.lin_m = 1.0 * std::pow(1 + t, lin_exp);
    r.full_rho = 2.0 * std::pow(1 + t, full_exp);
    r.full_m = 1.0 * std::pow(1 + t, full_exp);
    r.u_l2 = r.full_m;
    s.rows.push_back(r);
  }
  return s;
}

}  // namespace

TEST(Duhamel, ZeroDataGivesZeroSeries) {
  SpectralGrid g(2 * kPi, 16);
  const auto s = coupled_run(PerturbationState(g), config(0.1, 1.0), FluidParams{});
  ASSERT_EQ(s.rows.size(), 11u);
  for (const auto& r : s.rows) {
    EXPECT_EQ(r.diff(), 0.0);
    EXPECT_EQ(r.linear(), 0.0);
    EXPECT_EQ(r.full(), 0.0);
  }
  EXPECT_FALSE(s.failed);
}

TEST(Duhamel, InitialDifferenceIsExactlyZero) {
  SpectralGrid g(2 * kPi, 16);
  const auto s = coupled_run(oracle::random_state(g, 3, 0.2, 6), config(0.1, 0.5), FluidParams{1.0, 0.0, 1.4});
  ASSERT_FALSE(s.rows.empty());
  EXPECT_EQ(s.rows[0].t, 0.0);
  EXPECT_EQ(s.rows[0].diff_rho, 0.0);
  EXPECT_EQ(s.rows[0].diff_m, 0.0);
  EXPECT_EQ(s.rows[0].full_rho, s.rows[0].lin_rho);
  EXPECT_GT(s.rows.back().diff(), 0.0);
}

TEST(Duhamel, LinearOnlyRunHasNoDifference) {
  SpectralGrid g(2 * kPi, 16);
  SolverConfig c = config(0.1, 1.0);
  c.nonlinear = false;
  c.dealias = false;
  const auto s = coupled_run(oracle::random_state(g, 3, 0.2, 6), c, FluidParams{});
  for (const auto& r : s.rows) EXPECT_LE(r.diff(), 1e-10 * r.linear());
}

TEST(Duhamel, DifferenceIsQuadraticInAmplitude) {
  SpectralGrid g(2 * kPi, 16);
  const auto shape = oracle::random_state(g, 3, 1.0, 13);
  std::vector<double> d;
  for (double eps : {1e-2, 5e-3, 2.5e-3}) d.push_back(coupled_run(scaled(shape, eps), config(0.05, 1.0, 20), FluidParams{}).rows.back().diff());
  for (std::size_t i = 1; i < d.size(); ++i) EXPECT_NEAR(std::log2(d[i - 1] / d[i]), 2.0, 0.1);
}

TEST(Duhamel, RowsSatisfyTriangleInequality) {
  SpectralGrid g(2 * kPi, 16);
  const auto s = coupled_run(oracle::random_state(g, 3, 0.2, 2), config(0.05, 1.0, 4), FluidParams{});
  for (const auto& r : s.rows) {
    EXPECT_LE(r.full_rho, r.lin_rho + r.diff_rho + 1e-14);
    EXPECT_LE(r.full_m, r.lin_m + r.diff_m + 1e-14);
    EXPECT_GE(r.full_rho, std::abs(r.lin_rho - r.diff_rho) - 1e-14);
  }
}

TEST(Duhamel, ZeroDensityGivesEqualVelocityAndMomentum) {
  SpectralGrid g(2 * kPi, 16);
  auto s = oracle::random_state(g, 3, 0.1, 9);
  for (auto& c : s.rho_hat()) c = {};
  const auto series = coupled_run(s, config(0.1, 0.1), FluidParams{});
  // u = m / 1 exactly in real space; only the transform round trip rounds
  EXPECT_NEAR(series.rows[0].u_l2, series.rows[0].full_m, 1e-14 * series.rows[0].full_m);
  EXPECT_EQ(series.rows[0].rho_l3, 0.0);
}

TEST(Duhamel, DecayCheckOnSyntheticSeries) {
  const auto good = difference_decay_check(synthetic(-1.25, -0.75, -0.75), {10.0, 1e3});
  EXPECT_TRUE(good.pass);
  EXPECT_NEAR(good.difference.exponent, -1.25, 1e-10);
  EXPECT_NEAR(good.gap, 0.5, 1e-10);
  EXPECT_TRUE(good.full_matches_linear);

  const auto equal = difference_decay_check(synthetic(-0.75, -0.75, -0.75), {10.0, 1e3});
  EXPECT_FALSE(equal.pass);
  EXPECT_FALSE(equal.gap_ok);
  EXPECT_NEAR(equal.gap, 0.0, 1e-10);

  const auto off = difference_decay_check(synthetic(-1.25, -0.75, -1.0), {10.0, 1e3});
  EXPECT_TRUE(off.gap_ok);
  EXPECT_FALSE(off.full_matches_linear);
  EXPECT_FALSE(off.pass);
}

TEST(Duhamel, DecayCheckNeedsOneDecade) {
  try {
    difference_decay_check(synthetic(-1.25, -0.75, -0.75), {10.0, 50.0});
    FAIL();
  } catch (const InsufficientDataError& e) {
    EXPECT_NE(std::string(e.what()).find("decade"), std::string::npos);
  }
}

TEST(Duhamel, VelocityLowerBound) {
  auto s = synthetic(-1.25, -0.75, -0.75);
  for (auto& r : s.rows) {
    r.rho_l3 = 0.01 * std::pow(1 + r.t, -1.0);
    r.u_l6 = 0.5 * std::pow(1 + r.t, -1.25);
  }
  const auto ok = velocity_lower_bound_check(s, {10.0, 1e3});
  EXPECT_TRUE(ok.pointwise_ok);
  EXPECT_EQ(ok.violations, 0u);
  EXPECT_TRUE(ok.pass);
  EXPECT_NEAR(ok.fit.exponent, -0.75, 1e-10);

  for (auto& r : s.rows) r.u_l2 = 0.5 * r.full_m;
  const auto bad = velocity_lower_bound_check(s, {10.0, 1e3});
  EXPECT_FALSE(bad.pointwise_ok);
  EXPECT_EQ(bad.violations, s.rows.size());
  EXPECT_LT(bad.min_margin, 0.0);
  EXPECT_FALSE(bad.pass);
}

TEST(Duhamel, SmallDataSatisfiesPointwiseBound) {
  SpectralGrid g(2 * kPi, 16);
  const auto s = coupled_run(oracle::random_state(g, 3, 0.05, 31), config(0.1, 2.0), FluidParams{});
  for (const auto& r : s.rows) EXPECT_GE(r.u_l2, r.full_m - r.rho_l3 * r.u_l6);
}

TEST(Duhamel, CsvOutput) {
  const auto s = synthetic(-1.25, -0.75, -0.75);
  const auto path = std::filesystem::temp_directory_path() / "cnsdecay_difference_test.csv";
  write_difference_csv(path.string(), s);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, difference_csv_header());
  EXPECT_EQ(line.substr(0, 26), "t,diff_pair,lin_pair,full_");
  int rows = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 12);
    ++rows;
  }
  EXPECT_EQ(rows, 40);
  std::filesystem::remove(path);
}
