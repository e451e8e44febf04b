#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cnsdecay/errors.hpp"
#include "cnsdecay/initial_data.hpp"
#include "oracles.hpp"

using namespace cnsdecay;

namespace {

constexpr double kPi = std::numbers::pi;

InitialDataSpec spec_of(DataKind kind, double amplitude = 0.1) {
  InitialDataSpec s;
  s.kind = kind;
  s.amplitude = amplitude;
  s.k_cut = 2.0;
  s.width = 1.5;
  s.c0 = 1e-8;
  return s;
}

double min_of(const RealField& f) { return *std::min_element(f.begin(), f.end()); }

/// Copies coefficients onto a finer grid of the same box (zero padding).
SpectralField refine(const SpectralField& c, const SpectralGrid& from, const SpectralGrid& to) {
  SpectralField out = to.zeros_spectral();
  const int M = to.points();
  for (std::size_t idx = 0; idx < c.size(); ++idx) {
    if (from.is_nyquist(idx)) continue;
    const auto n = from.mode(idx);
    out[to.spectral_index((n[0] + M) % M, (n[1] + M) % M, n[2])] = c[idx];
  }
  return out;
}

/// Direct and perturbation forms of d_t u evaluated on a grid four times finer.
double residual_oracle(const PerturbationState& s, const FluidParams& p) {
  const SpectralGrid& g = s.grid();
  const SpectralGrid f(g.box_length(), 4 * g.points());
  const RealField rho = f.inverse(refine(s.rho_hat(), g, f));
  const SpectralVector uh_coarse = s.velocity_hat();
  RealVector u;
  SpectralVector uh;
  for (int a = 0; a < 3; ++a) {
    uh[a] = refine(uh_coarse[a], g, f);
    u[a] = f.inverse(uh[a]);
  }
  const std::size_t n = f.real_size();
  RealField pr(n);
  for (std::size_t q = 0; q < n; ++q) pr[q] = std::pow(1.0 + rho[q], p.gamma);
  const SpectralField rh = f.forward(rho), ph = f.forward(pr);
  const SpectralField div = divergence(uh, f);
  RealVector diff;
  for (int a = 0; a < 3; ++a) {
    const RealField lap = f.inverse(laplacian(uh[a], f));
    const RealField gdiv = f.inverse(derivative(div, f, a));
    const RealField gp = f.inverse(derivative(ph, f, a));
    const RealField gr = f.inverse(derivative(rh, f, a));
    std::array<RealField, 3> du;
    for (int b = 0; b < 3; ++b) du[b] = f.inverse(derivative(uh[a], f, b));
    diff[a].resize(n);
    for (std::size_t q = 0; q < n; ++q) {
      const double d = 1.0 + rho[q];
      const double adv = u[0][q] * du[0][q] + u[1][q] * du[1][q] + u[2][q] * du[2][q];
      const double visc = p.mu * lap[q] + (p.mu + p.lambda) * gdiv[q];
      const double direct = -adv + visc / d - gp[q] / d;
      const double s2 = -adv - rho[q] / d * visc - (p.gamma * std::pow(d, p.gamma - 2.0) - p.gamma) * gr[q];
      diff[a][q] = direct - (visc - p.gamma * gr[q] + s2);
    }
  }
  return lp_norm(diff, f, 2.0);
}

}  // namespace

TEST(InitialData, KindNames) {
  for (DataKind k : {DataKind::theorem13, DataKind::generic_eta, DataKind::solenoidal, DataKind::custom_profile})
    EXPECT_EQ(parse_data_kind(to_string(k)), k);
  EXPECT_THROW(parse_data_kind("gaussian"), ConfigError);
}

TEST(InitialData, ZeroAmplitudeGivesZeroState) {
  SpectralGrid g(2 * kPi, 16);
  for (DataKind k : {DataKind::theorem13, DataKind::generic_eta, DataKind::solenoidal, DataKind::custom_profile}) {
    const auto d = generate(spec_of(k, 0.0), g);
    EXPECT_EQ(oracle::max_abs(d.state.rho_hat()), 0.0);
    for (int a = 0; a < 3; ++a) EXPECT_EQ(oracle::max_abs(d.state.m_hat()[a]), 0.0);
  }
}

TEST(InitialData, FloorDataHasFloorAndZeroMomentum) {
  SpectralGrid g(20 * kPi, 32);
  InitialDataSpec s;  // k_cut 0.5, c0 1e-6
  s.amplitude = 0.3;
  const auto d = generate(s, g);
  const double dxi3 = std::pow(g.fundamental(), 1.5);
  int inside = 0;
  for (std::size_t i = 0; i < g.spectral_size(); ++i) {
    const double k = std::sqrt(g.wavenumber_sq(i));
    if (k == 0.0 || k > s.k_cut || g.is_nyquist(i)) continue;
    ++inside;
    EXPECT_GE(std::abs(d.state.rho_hat()[i]) / dxi3, s.c0);
    for (int a = 0; a < 3; ++a) EXPECT_EQ(d.state.m_hat()[a][i], Complex{});
  }
  EXPECT_GT(inside, 100);
  const RealField rho = d.state.rho_real();
  double mx = 0.0;
  for (double v : rho) mx = std::max(mx, std::abs(v));
  EXPECT_NEAR(mx, 0.3, 1e-12);
  EXPECT_EQ(d.state.rho_hat()[0], Complex{});
  ASSERT_TRUE(d.profile.has_value());
  EXPECT_TRUE(d.profile->low_frequency_floor);
}

TEST(InitialData, FloorBelowC0IsRejected) {
  SpectralGrid g(20 * kPi, 32);
  InitialDataSpec s;
  s.amplitude = 1e-12;
  s.c0 = 1.0;
  EXPECT_THROW(generate(s, g), InitialDataError);
}

TEST(InitialData, KCutMustLieBelowDealiasCutoff) {
  SpectralGrid g(2 * kPi, 16);  // cutoff 5
  InitialDataSpec s;
  s.k_cut = 5.0;
  try {
    generate(s, g);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("initial.k_cut"), std::string::npos);
  }
}

TEST(InitialData, PositivityErrorReportsLargestAmplitude) {
  SpectralGrid g(2 * kPi, 16);
  InitialDataSpec s = spec_of(DataKind::generic_eta, 5.0);
  s.density_floor = 0.2;
  double max_amp = 0.0;
  try {
    generate(s, g);
    FAIL();
  } catch (const InitialDataError& e) {
    max_amp = e.max_admissible_amplitude();
  }
  ASSERT_GT(max_amp, 0.0);
  ASSERT_LT(max_amp, 5.0);
  s.amplitude = max_amp * (1 - 1e-12);
  const auto d = generate(s, g);
  EXPECT_NEAR(1.0 + min_of(d.state.rho_real()), 0.2, 1e-9);
  EXPECT_GE(1.0 + min_of(d.state.rho_real()), 0.2 - 1e-12);
}

TEST(InitialData, RealFieldsAndZeroMean) {
  SpectralGrid g(2 * kPi, 16);
  for (DataKind k : {DataKind::theorem13, DataKind::generic_eta, DataKind::solenoidal, DataKind::custom_profile}) {
    const auto d = generate(spec_of(k), g);
    EXPECT_EQ(d.state.rho_hat()[0], Complex{});
    // a round trip through real space keeps only the Hermitian part
    EXPECT_LT(oracle::max_abs_diff(g.forward(d.state.rho_real()), d.state.rho_hat()), 1e-15);
    const RealState rs = d.state.to_real();
    for (int a = 0; a < 3; ++a) EXPECT_LT(oracle::max_abs_diff(g.forward(rs.m[a]), d.state.m_hat()[a]), 1e-15);
  }
}

TEST(InitialData, SolenoidalIsDivergenceFree) {
  SpectralGrid g(2 * kPi, 16);
  const auto d = generate(spec_of(DataKind::solenoidal, 0.2), g);
  EXPECT_EQ(oracle::max_abs(d.state.rho_hat()), 0.0);
  EXPECT_LT(oracle::max_abs(divergence(d.state.m_hat(), g)), 1e-15);
  const RealState rs = d.state.to_real();
  double mx = 0.0;
  for (std::size_t q = 0; q < g.real_size(); ++q)
    mx = std::max(mx, std::sqrt(rs.m[0][q] * rs.m[0][q] + rs.m[1][q] * rs.m[1][q] + rs.m[2][q] * rs.m[2][q]));
  EXPECT_NEAR(mx, 0.2, 1e-12);
}

TEST(InitialData, VanishingOrderOneAtTheOrigin) {
  SpectralGrid g(40 * kPi, 32);
  InitialDataSpec s = spec_of(DataKind::generic_eta, 0.1);
  s.k_cut = 0.4;
  s.width = 0.2;
  s.momentum_ratio = 0.5;
  auto shell_ratio = [&](const GeneratedData& d) {
    std::vector<double> r(21, 0.0);
    for (std::size_t i = 0; i < g.spectral_size(); ++i) {
      const int sh = g.shell(i);
      if (sh == 0 || sh > 20 || g.is_nyquist(i)) continue;
      double mag = std::norm(d.state.rho_hat()[i]);
      for (int a = 0; a < 3; ++a) mag += std::norm(d.state.m_hat()[a][i]);
      r[sh] = std::max(r[sh], std::sqrt(mag) / std::sqrt(g.wavenumber_sq(i)));
    }
    return r;
  };
  s.eta = 1.0;
  const auto d1 = generate(s, g);
  const auto r1 = shell_ratio(d1);
  const double bound = std::sqrt(1 + 3 * 0.25) * d1.scale * std::pow(g.fundamental(), 1.5) / s.width;
  for (int sh = 1; sh <= 20; ++sh)
    if (r1[sh] > 0) EXPECT_LE(r1[sh], bound * (1 + 1e-12)) << "shell " << sh;
  EXPECT_GT(r1[1], 0.9 * bound);

  s.eta = 0.0;
  const auto r0 = shell_ratio(generate(s, g));
  EXPECT_GT(r0[1], 3.0 * r0[16]);  // grows like 1/|xi| without the vanishing order
}

TEST(InitialData, SeedDeterminism) {
  SpectralGrid g(2 * kPi, 16);
  InitialDataSpec s = spec_of(DataKind::generic_eta);
  const auto a = generate(s, g), b = generate(s, g);
  EXPECT_EQ(a.state.rho_hat(), b.state.rho_hat());
  EXPECT_EQ(a.state.m_hat(), b.state.m_hat());
  s.seed = 2;
  const auto c = generate(s, g);
  EXPECT_GT(oracle::max_abs_diff(a.state.rho_hat(), c.state.rho_hat()), 1e-3 * oracle::max_abs(a.state.rho_hat()));
}

TEST(InitialData, ContinuumProfileMatchesGridModes) {
  SpectralGrid g(20 * kPi, 32);
  for (DataKind k : {DataKind::theorem13, DataKind::custom_profile}) {
    InitialDataSpec s;
    s.kind = k;
    s.amplitude = 0.2;
    s.width = 0.3;
    s.eta = k == DataKind::custom_profile ? 1.0 : 0.0;
    s.momentum_ratio = 0.7;
    s.profile_power = 3.0;
    const auto d = generate(s, g);
    ASSERT_TRUE(d.profile.has_value());
    const double dxi3 = std::pow(g.fundamental(), 1.5);
    double worst = 0.0, peak = 0.0;
    for (std::size_t i = 0; i < g.spectral_size(); ++i) {
      if (!g.retained_by_dealias(i) || g.wavenumber_sq(i) == 0.0) continue;
      const double k = std::sqrt(g.wavenumber_sq(i));
      const auto xi = g.wavevector(i);
      worst = std::max(worst, std::abs(d.state.rho_hat()[i] / dxi3 - d.profile->rho_hat(k)));
      peak = std::max(peak, std::abs(d.profile->rho_hat(k)));
      const Complex ml = d.profile->m_long ? d.profile->m_long(k) : Complex{};
      for (int a = 0; a < 3; ++a) worst = std::max(worst, std::abs(d.state.m_hat()[a][i] / dxi3 - ml * xi[a] / k));
    }
    EXPECT_LT(worst, 1e-10 * peak) << to_string(k);
  }
  EXPECT_FALSE(generate(spec_of(DataKind::generic_eta), SpectralGrid(2 * kPi, 16)).profile.has_value());
}

TEST(InitialData, AdmissibleResidualTrivialCases) {
  SpectralGrid g(2 * kPi, 16);
  const RealVector zero{g.zeros_real(), g.zeros_real(), g.zeros_real()};
  EXPECT_EQ(admissible_residual(g.zeros_real(), zero, g, FluidParams{}), 0.0);

  RealField rho = g.zeros_real();
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      for (int l = 0; l < 16; ++l) rho[g.real_index(i, j, l)] = 0.4 * std::cos(2 * kPi * i / 16);
  EXPECT_LT(admissible_residual(rho, zero, g, FluidParams{1.0, 0.0, 1.0}), 1e-13);
  // rho^2 stays band limited, so gamma = 2 is also exact on this grid
  EXPECT_LT(admissible_residual(rho, zero, g, FluidParams{1.0, 0.0, 2.0}), 1e-13);

  RealField bad = rho;
  bad[0] = -1.5;
  EXPECT_THROW(admissible_residual(bad, zero, g, FluidParams{}), PositivityError);
}

TEST(InitialData, AdmissibleResidualMatchesFineGridOracle) {
  SpectralGrid g(2 * kPi, 32);
  for (double gamma : {1.0, 1.4, 2.0}) {
    const FluidParams p{1.0, 0.3, gamma};
    const auto s = oracle::random_state(g, 2, 0.05, 17);
    const RealState rs = s.to_real();
    const double r = admissible_residual(rs.rho, s.velocity_real(), g, p);
    EXPECT_NEAR(r, residual_oracle(s, p), 1e-8) << "gamma = " << gamma;
  }
}

TEST(InitialData, NormReport) {
  SpectralGrid g(2 * kPi, 16);
  const NormReport z = norm_report(PerturbationState(g));
  EXPECT_EQ(z.rho_l1, 0.0);
  EXPECT_EQ(z.u_h2, 0.0);

  // L1 of a |cos x| against the exact integral a (2/pi) L^3; midpoint error O(h^2)
  SpectralGrid f(2 * kPi, 64);
  RealField rho = f.zeros_real();
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j)
      for (int l = 0; l < 64; ++l) rho[f.real_index(i, j, l)] = 0.2 * std::cos(2 * kPi * (i + 0.5) / 64);
  const auto st = PerturbationState::from_real(f, rho, {f.zeros_real(), f.zeros_real(), f.zeros_real()});
  const auto r = norm_report(st);
  const double exact = 0.2 * 2 / kPi * std::pow(2 * kPi, 3);
  EXPECT_NEAR(r.rho_l1, exact, 1e-3 * exact);
  EXPECT_NEAR(r.rho_l2, 0.2 * std::sqrt(0.5 * std::pow(2 * kPi, 3)), 1e-12);
}

TEST(InitialData, GaussianH2NormMatchesModeSum) {
  SpectralGrid g(20 * kPi, 32);
  InitialDataSpec s;
  s.amplitude = 0.25;
  s.width = 0.4;
  const auto d = generate(s, g);
  // full (not half) spectrum sum of the envelope, evaluated independently
  const double dk = g.fundamental(), c = std::pow(dk, 1.5) * d.scale;
  const int cut = g.dealias_cutoff_index();
  double sum = 0.0;
  for (int a = -cut; a <= cut; ++a)
    for (int b = -cut; b <= cut; ++b)
      for (int e = -cut; e <= cut; ++e) {
        const double k2 = dk * dk * (a * a + b * b + e * e);
        if (k2 == 0.0) continue;
        const double env = c * std::exp(-0.5 * k2 / (0.4 * 0.4));
        sum += env * env * (1 + k2 + k2 * k2);
      }
  const auto r = norm_report(d.state);
  EXPECT_NEAR(r.rho_h2, std::sqrt(sum), 1e-8 * std::sqrt(sum));
  EXPECT_EQ(r.u_h2, 0.0);
  EXPECT_GT(r.rho_l1, 0.0);
}
