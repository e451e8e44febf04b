#pragma once

#include "cnsdecay/grid.hpp"
#include "cnsdecay/params.hpp"

namespace cnsdecay {

/// Which physical field a norm refers to.
enum class Component { rho, u, m };

/// Sobolev space in which a derivative is measured.
enum class SobolevSpace { L2, H1, H2 };

/// Real-space view of a perturbation: rho = density - 1 and momentum m.
struct RealState {
  RealField rho;
  RealVector m;
};

/// Density perturbation and momentum on a periodic grid at time t.
///
/// The spectral coefficients are the stored representation; real-space values
/// are produced on demand by to_real(). The velocity u = m / (1 + rho) is
/// always derived, never stored.
class PerturbationState {
 public:
  explicit PerturbationState(SpectralGrid grid, double t = 0.0);
  PerturbationState(SpectralGrid grid, SpectralField rho_hat, SpectralVector m_hat, double t = 0.0);

  static PerturbationState from_real(SpectralGrid grid, const RealField& rho, const RealVector& m,
                                     double t = 0.0);

  const SpectralGrid& grid() const noexcept { return grid_; }
  double time() const noexcept { return t_; }
  void set_time(double t) noexcept { t_ = t; }

  const SpectralField& rho_hat() const noexcept { return rho_hat_; }
  const SpectralVector& m_hat() const noexcept { return m_hat_; }
  SpectralField& rho_hat() noexcept { return rho_hat_; }
  SpectralVector& m_hat() noexcept { return m_hat_; }

  RealState to_real() const;
  RealField rho_real() const { return grid_.inverse(rho_hat_); }

  /// u = m / (1 + rho) pointwise. Throws PositivityError if 1 + rho <= 0 anywhere.
  RealVector velocity_real() const;
  SpectralVector velocity_hat() const;

  /// Total mass of the perturbation, read from the zero mode.
  double perturbation_mass() const;

 private:
  SpectralGrid grid_;
  double t_;
  SpectralField rho_hat_;
  SpectralVector m_hat_;
};

/// min over grid points of 1 + rho.
double density_floor_check(const PerturbationState& state);
double density_floor(const RealField& rho);

/// Velocity from real-space density perturbation and momentum; throws PositivityError.
RealVector velocity_from_momentum(const RealField& rho, const RealVector& m);
/// Momentum (1 + rho) u pointwise.
RealVector momentum_from_velocity(const RealField& rho, const RealVector& u);

/// ||grad^d f||_X for X in {L2, H1, H2}, computed by Plancherel sums:
/// the H^s variant sums the squared L2 norms of orders d..d+s.
double sobolev_norm(const PerturbationState& state, Component component, int derivative_order,
                    SobolevSpace space);

/// Same as sobolev_norm, for raw spectral fields.
double sobolev_norm(const SpectralField& f, const SpectralGrid& grid, int derivative_order,
                    SobolevSpace space);
double sobolev_norm(const SpectralVector& f, const SpectralGrid& grid, int derivative_order,
                    SobolevSpace space);

}  // namespace cnsdecay
