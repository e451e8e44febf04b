#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cnsdecay/continuum.hpp"
#include "cnsdecay/semigroup.hpp"
#include "cnsdecay/state.hpp"

using namespace cnsdecay;

namespace {

constexpr double kPi = std::numbers::pi;

double gaussian_l2(double a, double w) { return std::sqrt(4.0 * kPi * a * a * std::sqrt(kPi) * w * w * w / 4.0); }

}  // namespace

TEST(Continuum, InitialNormOfGaussian) {
  const auto data = floor_gaussian_profile(2.0, 0.4);
  const FluidParams p{};
  const auto n = linear_l2_norm_continuum(data, p, 0.0);
  EXPECT_NEAR(n.rho, gaussian_l2(2.0, 0.4), 1e-9 * gaussian_l2(2.0, 0.4));
  EXPECT_EQ(n.m, 0.0);
  EXPECT_LT(n.relative_error, kContinuumRelTol);
}

TEST(Continuum, SolenoidalPartIsHeatFlow) {
  RadialProfileData data;
  const double a = 1.5, w = 0.3;
  data.m_sol = [=](double k) { return a * std::exp(-k * k / (2 * w * w)); };
  data.cutoff = 12 * w;
  data.scale = w;
  const FluidParams p{0.7, 0.1, 1.4};
  for (double t : {0.0, 1.0, 10.0, 1000.0}) {
    const double expected = std::sqrt(4 * kPi * a * a * std::sqrt(kPi) / 4 * std::pow(1 / (w * w) + 2 * p.mu * t, -1.5));
    const auto n = linear_l2_norm_continuum(data, p, t);
    EXPECT_NEAR(n.m, expected, 1e-8 * expected) << "t = " << t;
    EXPECT_EQ(n.rho, 0.0);
  }
}

TEST(Continuum, GradientOfSolenoidalPart) {
  RadialProfileData data;
  const double w = 0.5;
  data.m_sol = [=](double k) { return std::exp(-k * k / (2 * w * w)); };
  data.cutoff = 12 * w;
  data.scale = w;
  const FluidParams p{};
  const double t = 5.0;
  // 4 pi int k^4 e^{-b k^2} dk = 4 pi (3/8) sqrt(pi) b^{-5/2}
  const double b = 1 / (w * w) + 2 * p.mu * t;
  const double expected = std::sqrt(4 * kPi * 0.375 * std::sqrt(kPi) * std::pow(b, -2.5));
  EXPECT_NEAR(linear_l2_norm_continuum(data, p, t, 1).m, expected, 1e-8 * expected);
}

TEST(Continuum, FloorDataDecaysAtThreeQuarters) {
  const auto data = floor_gaussian_profile(1.0, 0.5);
  const FluidParams p{1.0, 0.0, 1.0};
  const auto check = verify_linear_decay(data, p, 0.0, {100.0, 1e4}, 30, 0.05);
  EXPECT_TRUE(check.pass);
  ASSERT_TRUE(check.rho_lower.has_value());
  ASSERT_TRUE(check.m_lower.has_value());
  EXPECT_NEAR(check.rho_upper.exponent, -0.75, 0.05);
  EXPECT_NEAR(check.m_upper.exponent, -0.75, 0.05);
  EXPECT_EQ(check.times.size(), 30u);
}

TEST(Continuum, VanishingDataDecaysFaster) {
  const auto data = vanishing_gaussian_profile(1.0, 0.5, 1.0);
  const FluidParams p{1.0, 0.5, 1.4};
  const auto check = verify_linear_decay(data, p, 1.0, {100.0, 1e4}, 30, 0.05);
  EXPECT_TRUE(check.pass);
  EXPECT_FALSE(check.rho_lower.has_value());
  EXPECT_NEAR(check.rho_upper.exponent, -1.25, 0.05);
  EXPECT_NEAR(check.m_upper.exponent, -1.25, 0.05);
}

TEST(Continuum, ZeroDataIsDegenerate) {
  const auto data = floor_gaussian_profile(0.0, 0.5);
  const auto check = verify_linear_decay(data, FluidParams{}, 0.0, {100.0, 1e4});
  EXPECT_TRUE(check.degenerate_input);
  EXPECT_FALSE(check.pass);
}

// The grid norm is a Riemann sum of the continuum integral with spacing 2 pi / L.
TEST(Continuum, AgreesWithLargeBoxGrid) {
  const double L = 40 * kPi;
  SpectralGrid g(L, 64);
  // rho even and m_long odd in k keep every evolved integrand smooth, so the
  // Riemann sum converges spectrally
  const double w = 0.15;
  RadialProfileData data;
  const auto g0 = [w](double k) { return std::exp(-k * k / (2 * w * w)); };
  data.rho_hat = [g0](double k) { return Complex(g0(k), 0.0); };
  data.m_long = [g0, w](double k) { return Complex(0.0, 0.8 * (k / w) * g0(k)); };
  data.m_sol = [g0, w](double k) { return 0.6 * (k / w) * g0(k); };
  data.cutoff = 14 * w;
  data.scale = w;
  const FluidParams p{1.0, 0.3, 1.0};
  const double c = std::pow(g.fundamental(), 1.5);

  PerturbationState s(g);
  for (std::size_t i = 0; i < g.spectral_size(); ++i) {
    if (g.is_nyquist(i)) continue;
    const auto xi = g.wavevector(i);
    const double k = std::sqrt(g.wavenumber_sq(i));
    s.rho_hat()[i] = c * data.rho_hat(k);
    if (k == 0.0) continue;
    // transverse direction odd in xi, so i * e keeps the field real
    std::array<double, 3> e = {-xi[1], xi[0], 0.0};
    if (e[0] == 0.0 && e[1] == 0.0) e = {xi[2], 0.0, 0.0};
    const double ne = std::sqrt(e[0] * e[0] + e[1] * e[1]);
    const Complex tr = Complex(0.0, data.m_sol(k) / ne);
    for (int d = 0; d < 3; ++d) s.m_hat()[d][i] = c * (data.m_long(k) * xi[d] / k + tr * e[d]);
  }

  for (double t : {0.0, 1.0, 10.0}) {
    const auto st = apply_semigroup_grid(s, p, t);
    const auto cn = linear_l2_norm_continuum(data, p, t);
    const double rho = sobolev_norm(st, Component::rho, 0, SobolevSpace::L2);
    const double m = sobolev_norm(st, Component::m, 0, SobolevSpace::L2);
    EXPECT_NEAR(rho, cn.rho, 1e-7 * cn.rho) << "t = " << t;
    EXPECT_NEAR(m, cn.m, 1e-7 * cn.m) << "t = " << t;
  }
}
