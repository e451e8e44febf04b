#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cnsdecay/errors.hpp"
#include "cnsdecay/semigroup.hpp"
#include "oracles.hpp"

using namespace cnsdecay;

namespace {

double rel_state_error(const PerturbationState& a, const PerturbationState& ref) {
  double num = oracle::max_abs_diff(a.rho_hat(), ref.rho_hat());
  double den = oracle::max_abs(ref.rho_hat());
  for (int c = 0; c < 3; ++c) {
    num = std::max(num, oracle::max_abs_diff(a.m_hat()[c], ref.m_hat()[c]));
    den = std::max(den, oracle::max_abs(ref.m_hat()[c]));
  }
  return num / den;
}

}  // namespace

TEST(Semigroup, GridApplicationMatchesModewisePade) {
  SpectralGrid g(5.0, 8);
  const auto s = oracle::random_state(g, 3, 0.1, 11);
  for (const FluidParams& p : {FluidParams{1.0, 0.0, 1.0}, FluidParams{0.3, 0.2, 1.4}}) {
    for (double t : {0.05, 0.7, 3.0}) {
      const auto fast = apply_semigroup_grid(s, p, t);
      const auto ref = oracle::semigroup_by_expm(s, p, t);
      EXPECT_LT(rel_state_error(fast, ref), 1e-10) << t;
      EXPECT_DOUBLE_EQ(fast.time(), t);
    }
  }
}

TEST(Semigroup, SolenoidalModeDecaysLikeHeat) {
  // m = (0, sin(kx), 0), rho = 0: purely solenoidal, e^{-mu k^2 t}.
  const double L = 2 * std::numbers::pi;
  SpectralGrid g(L, 8);
  RealField rho = g.zeros_real();
  RealVector m{g.zeros_real(), g.zeros_real(), g.zeros_real()};
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      for (int l = 0; l < 8; ++l) m[1][g.real_index(i, j, l)] = std::sin(2.0 * i * g.spacing());
  const auto s = PerturbationState::from_real(g, rho, m);
  const FluidParams p{0.6, 0.0, 1.0};
  const auto out = apply_semigroup_grid(s, p, 1.3);
  const double factor = std::exp(-p.mu * 4.0 * 1.3);
  for (std::size_t i = 0; i < g.spectral_size(); ++i) {
    ASSERT_NEAR(std::abs(out.m_hat()[1][i] - factor * s.m_hat()[1][i]), 0.0, 1e-14);
    ASSERT_EQ(out.rho_hat()[i], Complex{});
  }
}

TEST(Semigroup, ZeroTimeIsExactCopyAndMassIsKept) {
  SpectralGrid g(3.0, 8);
  const auto s = oracle::random_state(g, 2, 0.2, 3, false);
  const auto same = apply_semigroup_grid(s, FluidParams{}, 0.0);
  EXPECT_EQ(same.rho_hat(), s.rho_hat());
  EXPECT_EQ(same.m_hat()[2], s.m_hat()[2]);
  const auto later = apply_semigroup_grid(s, FluidParams{}, 4.0);
  EXPECT_EQ(later.rho_hat()[0], s.rho_hat()[0]);
  EXPECT_THROW(apply_semigroup_grid(s, FluidParams{}, -0.1), DomainError);
}

TEST(Semigroup, TableComposition) {
  SpectralGrid g(4.0, 8);
  const FluidParams p{1.0, 0.0, 2.0};
  const auto s = oracle::random_state(g, 3, 0.1, 8);
  const ShellTable a = semigroup_table(g, p, 0.4), b = semigroup_table(g, p, 0.9);
  SpectralField r1, r2;
  SpectralVector m1, m2;
  a.apply(s.rho_hat(), s.m_hat(), r1, m1);
  b.apply(r1, m1, r2, m2);
  const auto direct = apply_semigroup_grid(s, p, 1.3);
  EXPECT_LT(oracle::max_abs_diff(r2, direct.rho_hat()), 1e-12 * oracle::max_abs(direct.rho_hat()));
  EXPECT_LT(oracle::max_abs_diff(m2[0], direct.m_hat()[0]), 1e-12 * oracle::max_abs(direct.m_hat()[0]));
}

TEST(Semigroup, PhiTablesOnZeroShell) {
  SpectralGrid g(2.0, 8);
  const PhiTables t = phi_tables(g, FluidParams{}, 0.1);
  EXPECT_EQ(t.phi1[0].acoustic.f11, 1.0);
  EXPECT_EQ(t.phi1[0].solenoidal, 1.0);
  EXPECT_EQ(t.phi2[0].acoustic.f22, 0.5);
  EXPECT_EQ(t.phi2[0].solenoidal, 0.5);
  EXPECT_EQ(t.phi0.size(), static_cast<std::size_t>(g.max_shell() + 1));
  // solenoidal phi_1 on shell s: (1 - e^{-mu k^2 h}) / (mu k^2 h)
  const double k2 = g.fundamental() * g.fundamental() * 3, h = 0.1;
  EXPECT_NEAR(t.phi1[3].solenoidal, -std::expm1(-k2 * h) / (k2 * h), 1e-15);
}

TEST(Semigroup, TableSizeMustMatchGrid) {
  SpectralGrid g(2.0, 8);
  EXPECT_THROW(ShellTable(g, std::vector<ShellOperator>(3)), DimensionError);
}
