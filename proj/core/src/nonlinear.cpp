#include "cnsdecay/nonlinear.hpp"

#include <cmath>
#include <sstream>

#include "cnsdecay/errors.hpp"

namespace cnsdecay {

namespace {

void finish(SpectralField& c, const SpectralGrid& grid, bool dealias) {
  if (dealias)
    dealias_in_place(c, grid);
  else
    remove_nyquist(c, grid);
}

void require_positive(const RealField& rho) {
  const double lo = density_floor(rho);
  if (!(lo > 0.0)) {
    std::ostringstream msg;
    msg << "density positivity violated: min(1 + rho) = " << lo;
    throw PositivityError(msg.str(), lo);
  }
}

/// P(1 + r) - P(1) - P'(1) r without cancellation for small r.
double pressure_remainder(double r, double gamma) {
  if (gamma == 1.0) return 0.0;
  return std::expm1(gamma * std::log1p(r)) - gamma * r;
}

}  // namespace

void velocity_form_terms(const SpectralGrid& grid, const SpectralField& rho_hat, const SpectralVector& u_hat,
                         const FluidParams& params, bool dealias, SpectralField& s1, SpectralVector& s2) {
  grid.check(rho_hat);
  for (const auto& c : u_hat) grid.check(c);
  const std::size_t n = grid.real_size();
  const std::size_t ns = grid.spectral_size();

  const RealField rho = grid.inverse(rho_hat);
  require_positive(rho);
  RealVector u;
  for (int i = 0; i < 3; ++i) u[i] = grid.inverse(u_hat[i]);
  RealVector grad_rho;
  for (int i = 0; i < 3; ++i) grad_rho[i] = grid.inverse(derivative(rho_hat, grid, i));
  std::array<RealField, 9> g;  // g[3i+j] = d_j u_i
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g[3 * i + j] = grid.inverse(derivative(u_hat[i], grid, j));

  // V = mu Lap u + (mu + lambda) grad div u, formed spectrally.
  const double mu = params.mu, ml = params.mu + params.lambda;
  RealVector visc;
  {
    SpectralVector vh{SpectralField(ns), SpectralField(ns), SpectralField(ns)};
    for (std::size_t idx = 0; idx < ns; ++idx) {
      const auto k = grid.wavevector(idx);
      const double k2 = grid.wavenumber_sq(idx);
      const Complex kd = k[0] * u_hat[0][idx] + k[1] * u_hat[1][idx] + k[2] * u_hat[2][idx];
      for (int i = 0; i < 3; ++i) vh[i][idx] = -mu * k2 * u_hat[i][idx] - ml * k[i] * kd;
    }
    for (int i = 0; i < 3; ++i) visc[i] = grid.inverse(vh[i]);
  }

  const double gamma = params.gamma;
  RealField r1(n);
  RealVector r2{RealField(n), RealField(n), RealField(n)};
  for (std::size_t p = 0; p < n; ++p) {
    const double r = rho[p];
    const double density = 1.0 + r;
    const double ux = u[0][p], uy = u[1][p], uz = u[2][p];
    const double div = g[0][p] + g[4][p] + g[8][p];
    r1[p] = -r * div - (ux * grad_rho[0][p] + uy * grad_rho[1][p] + uz * grad_rho[2][p]);
    const double visc_coeff = r / density;
    const double press_coeff = gamma == 1.0 ? -r / density : gamma * std::pow(density, gamma - 2.0) - gamma;
    for (int i = 0; i < 3; ++i) {
      const double adv = ux * g[3 * i][p] + uy * g[3 * i + 1][p] + uz * g[3 * i + 2][p];
      r2[i][p] = -adv - visc_coeff * visc[i][p] - press_coeff * grad_rho[i][p];
    }
  }

  grid.forward(r1, s1);
  finish(s1, grid, dealias);
  s1[0] = Complex{};
  for (int i = 0; i < 3; ++i) {
    grid.forward(r2[i], s2[i]);
    finish(s2[i], grid, dealias);
  }
}

void momentum_form_terms(const SpectralGrid& grid, const SpectralField& rho_hat, const SpectralVector& m_hat,
                         const FluidParams& params, bool dealias, SpectralVector& minus_div_flux) {
  grid.check(rho_hat);
  for (const auto& c : m_hat) grid.check(c);
  const std::size_t n = grid.real_size();
  const std::size_t ns = grid.spectral_size();

  const RealField rho = grid.inverse(rho_hat);
  require_positive(rho);
  RealVector m;
  for (int i = 0; i < 3; ++i) m[i] = grid.inverse(m_hat[i]);

  // Pointwise: T_ij = m_i u_j (symmetric), w = rho u, Pi = pressure remainder.
  std::array<RealField, 6> t;
  for (auto& f : t) f.resize(n);
  RealVector w{RealField(n), RealField(n), RealField(n)};
  const double gamma = params.gamma;
  const bool has_pi = gamma != 1.0;
  RealField pi(has_pi ? n : 0);
  for (std::size_t p = 0; p < n; ++p) {
    const double r = rho[p];
    const double inv = 1.0 / (1.0 + r);
    const double ux = m[0][p] * inv, uy = m[1][p] * inv, uz = m[2][p] * inv;
    t[0][p] = m[0][p] * ux;
    t[1][p] = m[0][p] * uy;
    t[2][p] = m[0][p] * uz;
    t[3][p] = m[1][p] * uy;
    t[4][p] = m[1][p] * uz;
    t[5][p] = m[2][p] * uz;
    w[0][p] = r * ux;
    w[1][p] = r * uy;
    w[2][p] = r * uz;
    if (has_pi) pi[p] = pressure_remainder(r, gamma);
  }
  std::array<SpectralField, 6> th;
  for (int a = 0; a < 6; ++a) th[a] = grid.forward(t[a]);
  SpectralVector wh{grid.forward(w[0]), grid.forward(w[1]), grid.forward(w[2])};
  const SpectralField pih = has_pi ? grid.forward(pi) : grid.zeros_spectral();

  // index into the packed symmetric tensor
  static constexpr int sym[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
  const double mu = params.mu, ml = params.mu + params.lambda;
  for (auto& c : minus_div_flux) c.resize(ns);
  for (std::size_t idx = 0; idx < ns; ++idx) {
    const auto k = grid.wavevector(idx);
    const double k2 = grid.wavenumber_sq(idx);
    const Complex kw = k[0] * wh[0][idx] + k[1] * wh[1][idx] + k[2] * wh[2][idx];
    for (int i = 0; i < 3; ++i) {
      const Complex kt = k[0] * th[sym[i][0]][idx] + k[1] * th[sym[i][1]][idx] + k[2] * th[sym[i][2]][idx];
      // -i k_j T_ij - i k_i Pi + mu k^2 w_i + (mu+lambda) k_i (k.w)
      const Complex a = kt + k[i] * pih[idx];
      minus_div_flux[i][idx] = Complex(a.imag(), -a.real()) + mu * k2 * wh[i][idx] + ml * k[i] * kw;
    }
  }
  for (int i = 0; i < 3; ++i) finish(minus_div_flux[i], grid, dealias);
}

NonlinearTerms nonlinear_terms_velocity(const PerturbationState& state, const FluidParams& params, bool dealias) {
  const SpectralGrid& grid = state.grid();
  NonlinearTerms out;
  const SpectralVector u_hat = state.velocity_hat();
  out.s1.resize(grid.spectral_size());
  for (auto& c : out.s2) c.resize(grid.spectral_size());
  velocity_form_terms(grid, state.rho_hat(), u_hat, params, dealias, out.s1, out.s2);
  return out;
}

NonlinearTerms nonlinear_flux(const PerturbationState& state, const FluidParams& params, bool dealias) {
  const SpectralGrid& grid = state.grid();
  const std::size_t n = grid.real_size();
  NonlinearTerms out;
  const RealState rs = state.to_real();
  const RealVector u = velocity_from_momentum(rs.rho, rs.m);
  RealVector w{RealField(n), RealField(n), RealField(n)};
  for (int i = 0; i < 3; ++i)
    for (std::size_t p = 0; p < n; ++p) w[i][p] = rs.rho[p] * u[i][p];
  const SpectralVector wh{grid.forward(w[0]), grid.forward(w[1]), grid.forward(w[2])};
  std::array<RealField, 9> gw;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) gw[3 * i + j] = grid.inverse(derivative(wh[i], grid, j));

  const double mu = params.mu, ml = params.mu + params.lambda;
  for (auto& f : out.flux) f.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    const double r = rs.rho[p];
    const double divw = gw[0][p] + gw[4][p] + gw[8][p];
    const double diag = ml * divw + pressure_remainder(r, params.gamma);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double f = (1.0 + r) * u[i][p] * u[j][p] + mu * gw[3 * i + j][p];
        if (i == j) f += diag;
        out.flux[3 * i + j][p] = f;
      }
  }
  momentum_form_terms(grid, state.rho_hat(), state.m_hat(), params, dealias, out.minus_div_flux);
  return out;
}

}  // namespace cnsdecay
