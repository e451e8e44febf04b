#include <gtest/gtest.h>

#include <cmath>
#include <algorithm>
#include <numbers>
#include <sstream>

#include "cnsdecay/decay_fit.hpp"
#include "cnsdecay/energy.hpp"
#include "cnsdecay/errors.hpp"
#include "oracles.hpp"

using namespace cnsdecay;

namespace {

constexpr double kPi = std::numbers::pi;

// rho = a cos(k x), u = b sin(k x) e_x on the 2 pi box.
struct SingleMode {
  SpectralGrid g{2 * kPi, 16};
  double a = 0.3, b = 0.7, k = 2.0;
  SpectralField rho_hat;
  SpectralVector u_hat;
  double half_volume = 0.5 * std::pow(2 * kPi, 3);

  SingleMode() {
    RealField rho = g.zeros_real(), ux = g.zeros_real();
    const double h = g.spacing();
    for (int i = 0; i < g.points(); ++i)
      for (int j = 0; j < g.points(); ++j)
        for (int l = 0; l < g.points(); ++l) {
          rho[g.real_index(i, j, l)] = a * std::cos(k * i * h);
          ux[g.real_index(i, j, l)] = b * std::sin(k * i * h);
        }
    rho_hat = g.forward(rho);
    u_hat = {g.forward(ux), g.zeros_spectral(), g.zeros_spectral()};
  }
};

EnergyReport synthetic(double t, double e1_sq, double dissipation) {
  EnergyReport r;
  r.t = t;
  r.e1_sq = e1_sq;
  r.grad2_u_h1 = std::sqrt(dissipation);
  return r;
}

}  // namespace

TEST(Energy, SingleModeE1) {
  SingleMode s;
  const FluidParams p{1.0, 0.2, 1.4};
  const EnergyConfig cfg{0.1, 0.0, 1.0};
  const auto e = energy_e1(s.g, s.rho_hat, s.u_hat, p, cfg);
  const double k2 = s.k * s.k, k4 = k2 * k2;
  EXPECT_NEAR(e.grad_u_h1_sq, s.b * s.b * (k2 + k4) * s.half_volume, 1e-10);
  EXPECT_NEAR(e.grad_rho_h1_sq, s.a * s.a * (k2 + k4) * s.half_volume, 1e-10);
  EXPECT_NEAR(e.cross, -s.a * s.b * k2 * s.k * s.half_volume, 1e-10);
  EXPECT_NEAR(e.value, e.grad_u_h1_sq + 1.4 * e.grad_rho_h1_sq + 2 * 0.1 * e.cross, 1e-10);

  const auto d = dissipation_terms(s.g, s.rho_hat, s.u_hat);
  EXPECT_NEAR(d.grad2_u_h1_sq, s.b * s.b * (k4 + k4 * k2) * s.half_volume, 1e-9);
  EXPECT_NEAR(d.grad2_rho_l2_sq, s.a * s.a * k4 * s.half_volume, 1e-10);
}

TEST(Energy, LinearTimeDerivativeOfSingleMode) {
  SingleMode s;
  const FluidParams p{0.8, 0.3, 1.5};
  const auto dt = time_derivative_norms(s.g, s.rho_hat, s.u_hat, p, true, false);
  const double root = std::sqrt(s.half_volume);
  EXPECT_NEAR(dt[0], s.b * s.k * root, 1e-10);
  EXPECT_NEAR(dt[1], std::abs(-p.nu() * s.b * s.k * s.k + p.gamma * s.a * s.k) * root, 1e-10);
}

TEST(Energy, EquivalenceAndSplitInequalitiesOnRandomStates) {
  SpectralGrid g(2 * kPi, 16);
  const FluidParams p{1.0, 0.5, 1.4};
  const EnergyConfig cfg{};
  for (unsigned seed = 1; seed <= 5; ++seed) {
    const auto st = oracle::random_state(g, 4, 0.05, seed);
    for (double t : {0.0, 3.0, 100.0, 1e4}) {
      PerturbationState s = st;
      s.set_time(t);
      const auto r = energy_report(s, p, cfg, 0.1);
      EXPECT_TRUE(r.split_inequalities_ok);
      EXPECT_TRUE(r.e1_equivalence_ok);
      EXPECT_TRUE(r.density_floor_ok);
      EXPECT_NEAR(r.split_u.total(), r.u_l2, 1e-12 * r.u_l2);
      EXPECT_NEAR(r.split_grad_rho.total(), sobolev_norm(s, Component::rho, 1, SobolevSpace::L2), 1e-12);
    }
  }
}

TEST(Energy, SplitRadiusAndMarginsAreNonNegative) {
  SpectralGrid g(2 * kPi, 16);
  const auto s = oracle::random_state(g, 6, 0.1, 9);
  const auto u = s.velocity_hat();
  for (double R : {0.5, 3.0, 40.0}) {
    const auto rep = fourier_split_norms(g, s.rho_hat(), u, 7.0, R);
    EXPECT_DOUBLE_EQ(rep.a, R / 8.0);
    EXPECT_DOUBLE_EQ(rep.radius, std::sqrt(R / 8.0));
    for (int i = 0; i < 3; ++i) EXPECT_GE(rep.margin[i], -1e-12 * rep.scale[i]);
    EXPECT_TRUE(rep.inequalities_hold());
  }
}

TEST(Energy, DensityFloorFlag) {
  SpectralGrid g(2 * kPi, 16);
  const auto s = oracle::random_state(g, 2, 0.5, 3);
  const auto r = energy_report(s, FluidParams{}, EnergyConfig{}, 0.6);
  EXPECT_LT(r.min_density, 0.6);
  EXPECT_FALSE(r.density_floor_ok);
}

TEST(Energy, CsvHeaderMatchesRow) {
  SpectralGrid g(2 * kPi, 16);
  const auto r = energy_report(oracle::random_state(g, 2, 0.05, 4), FluidParams{}, EnergyConfig{}, 0.1);
  const std::string header = energy_csv_header();
  const std::string row = energy_csv_row(r);
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), std::count(row.begin(), row.end(), ','));
  EXPECT_EQ(header.substr(0, 7), "t,rho_l");
  EXPECT_EQ(row.find('\n'), std::string::npos);
}

TEST(Energy, InequalityOnSyntheticSeries) {
  const FluidParams p{};
  const EnergyConfig cfg{};
  const double cs = cfg.c_star(p);
  std::vector<EnergyReport> ok, bad, late;
  for (int i = 0; i <= 400; ++i) {
    const double t = 0.01 * i;
    const double e = std::exp(-t);
    ok.push_back(synthetic(t, e, 0.5 * e / cs));
    bad.push_back(synthetic(t, e, 2.0 * e / cs));
    // violates until t = 2, then the dissipation falls below the decay rate
    late.push_back(synthetic(t, e, (t < 2.0 ? 2.0 : 0.5) * e / cs));
  }
  const auto a = check_energy_inequality(ok, p, cfg);
  EXPECT_EQ(a.violations, 0u);
  ASSERT_TRUE(a.first_time_satisfied);
  EXPECT_EQ(*a.first_time_satisfied, 0.0);
  EXPECT_NEAR(a.derivative[100], -std::exp(-1.0), 1e-4);

  const auto b = check_energy_inequality(bad, p, cfg);
  EXPECT_EQ(b.violations, 401u);
  EXPECT_FALSE(b.first_time_satisfied);

  const auto c = check_energy_inequality(late, p, cfg);
  ASSERT_TRUE(c.first_time_satisfied);
  EXPECT_NEAR(*c.first_time_satisfied, 2.0, 1e-12);

  EXPECT_THROW(check_energy_inequality({ok[0], ok[1]}, p, cfg), InsufficientDataError);
}

TEST(Energy, WeightedDissipationClosedForm) {
  // (1+t)^2 D = (1+t)^{-2}, so the integral is 1 - 1/(1+t)
  std::vector<EnergyReport> fast, slow;
  for (double t : log_spaced_times(0.0, 1e4, 4000)) {
    fast.push_back(synthetic(t, 1.0, std::pow(1 + t, -4.0)));
    slow.push_back(synthetic(t, 1.0, std::pow(1 + t, -3.0)));
  }
  const auto w = weighted_dissipation_integral(fast);
  for (std::size_t i = 0; i < fast.size(); i += 500)
    EXPECT_NEAR(w.running[i], 1 - 1 / (1 + fast[i].t), 1e-5) << "t = " << fast[i].t;
  EXPECT_NEAR(w.final_value, 1 - 1 / (1 + 1e4), 1e-5);
  EXPECT_TRUE(w.plateau);
  EXPECT_LT(w.last_decade_growth, 0.01);

  // (1+t)^2 D = (1+t)^{-1} grows like log(1+t): no plateau
  const auto v = weighted_dissipation_integral(slow);
  EXPECT_NEAR(v.final_value, std::log(1 + 1e4), 1e-3);
  EXPECT_FALSE(v.plateau);
  EXPECT_NEAR(v.last_decade_growth, std::log(10.0) / std::log(1 + 1e4), 1e-3);

  EXPECT_THROW(weighted_dissipation_integral({fast[0]}), InsufficientDataError);
  EXPECT_THROW(weighted_dissipation_integral({synthetic(0, 1, 1), synthetic(3, 1, 1), synthetic(5, 1, 1)}),
               InsufficientDataError);
}

TEST(Energy, ConfigValidation) {
  const FluidParams p{1.0, 0.0, 1.0};
  EXPECT_NO_THROW((EnergyConfig{0.5, 0.0, 1.0}.validate(p)));
  EXPECT_THROW((EnergyConfig{0.6, 0.0, 1.0}.validate(p)), ConfigError);
  EXPECT_THROW((EnergyConfig{0.1, -1.0, 1.0}.validate(p)), ConfigError);
  EXPECT_THROW((EnergyConfig{0.1, 0.0, 2.0}.validate(p)), ConfigError);
  EXPECT_DOUBLE_EQ((EnergyConfig{0.1, 0.0, 1.0}.splitting_radius_constant(p)), 6 * 1.1 / 0.1);
}
