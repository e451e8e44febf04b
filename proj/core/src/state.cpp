#include "cnsdecay/state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cnsdecay/errors.hpp"

namespace cnsdecay {

PerturbationState::PerturbationState(SpectralGrid grid, double t)
    : grid_(std::move(grid)),
      t_(t),
      rho_hat_(grid_.zeros_spectral()),
      m_hat_{grid_.zeros_spectral(), grid_.zeros_spectral(), grid_.zeros_spectral()} {}

PerturbationState::PerturbationState(SpectralGrid grid, SpectralField rho_hat, SpectralVector m_hat,
                                     double t)
    : grid_(std::move(grid)), t_(t), rho_hat_(std::move(rho_hat)), m_hat_(std::move(m_hat)) {
  grid_.check(rho_hat_);
  for (const auto& c : m_hat_) grid_.check(c);
}

PerturbationState PerturbationState::from_real(SpectralGrid grid, const RealField& rho,
                                               const RealVector& m, double t) {
  SpectralField rh = grid.forward(rho);
  SpectralVector mh{grid.forward(m[0]), grid.forward(m[1]), grid.forward(m[2])};
  return PerturbationState(std::move(grid), std::move(rh), std::move(mh), t);
}

RealState PerturbationState::to_real() const {
  return {grid_.inverse(rho_hat_),
          {grid_.inverse(m_hat_[0]), grid_.inverse(m_hat_[1]), grid_.inverse(m_hat_[2])}};
}

RealVector PerturbationState::velocity_real() const {
  const RealState r = to_real();
  return velocity_from_momentum(r.rho, r.m);
}

SpectralVector PerturbationState::velocity_hat() const {
  const RealVector u = velocity_real();
  return {grid_.forward(u[0]), grid_.forward(u[1]), grid_.forward(u[2])};
}

double PerturbationState::perturbation_mass() const {
  // integral of rho = L^{3/2} * rho_hat(0) in the unitary convention
  return std::pow(grid_.box_length(), 1.5) * rho_hat_[0].real();
}

double density_floor(const RealField& rho) {
  double lo = std::numeric_limits<double>::infinity();
  for (double r : rho) lo = std::min(lo, 1.0 + r);
  return lo;
}

double density_floor_check(const PerturbationState& state) { return density_floor(state.rho_real()); }

RealVector velocity_from_momentum(const RealField& rho, const RealVector& m) {
  RealVector u{RealField(rho.size()), RealField(rho.size()), RealField(rho.size())};
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double density = 1.0 + rho[i];
    lo = std::min(lo, density);
    const double inv = 1.0 / density;
    u[0][i] = m[0][i] * inv;
    u[1][i] = m[1][i] * inv;
    u[2][i] = m[2][i] * inv;
  }
  if (!(lo > 0.0)) {
    std::ostringstream msg;
    msg << "density positivity violated: min(1 + rho) = " << lo;
    throw PositivityError(msg.str(), lo);
  }
  return u;
}

RealVector momentum_from_velocity(const RealField& rho, const RealVector& u) {
  RealVector m{RealField(rho.size()), RealField(rho.size()), RealField(rho.size())};
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double density = 1.0 + rho[i];
    m[0][i] = density * u[0][i];
    m[1][i] = density * u[1][i];
    m[2][i] = density * u[2][i];
  }
  return m;
}

namespace {

int extra_orders(SobolevSpace space) {
  switch (space) {
    case SobolevSpace::L2: return 0;
    case SobolevSpace::H1: return 1;
    case SobolevSpace::H2: return 2;
  }
  return 0;
}

void check_order(int d) {
  if (d < 0 || d > 3) throw DomainError("derivative order must be 0..3");
}

}  // namespace

double sobolev_norm(const SpectralField& f, const SpectralGrid& grid, int derivative_order,
                    SobolevSpace space) {
  check_order(derivative_order);
  double sum = 0.0;
  for (int j = 0; j <= extra_orders(space); ++j) sum += derivative_norm_sq(f, grid, derivative_order + j);
  return std::sqrt(sum);
}

double sobolev_norm(const SpectralVector& f, const SpectralGrid& grid, int derivative_order,
                    SobolevSpace space) {
  check_order(derivative_order);
  double sum = 0.0;
  for (int j = 0; j <= extra_orders(space); ++j) sum += derivative_norm_sq(f, grid, derivative_order + j);
  return std::sqrt(sum);
}

double sobolev_norm(const PerturbationState& state, Component component, int derivative_order,
                    SobolevSpace space) {
  switch (component) {
    case Component::rho: return sobolev_norm(state.rho_hat(), state.grid(), derivative_order, space);
    case Component::m: return sobolev_norm(state.m_hat(), state.grid(), derivative_order, space);
    case Component::u: return sobolev_norm(state.velocity_hat(), state.grid(), derivative_order, space);
  }
  return 0.0;
}

}  // namespace cnsdecay
