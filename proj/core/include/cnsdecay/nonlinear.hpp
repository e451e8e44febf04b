#pragma once

#include <array>

#include "cnsdecay/grid.hpp"
#include "cnsdecay/params.hpp"
#include "cnsdecay/state.hpp"

namespace cnsdecay {

/// Nonlinear parts of the perturbation system.
///
/// Velocity form:  rho_t + div u = S1,  u_t - mu Lap u - (mu+lambda) grad div u + P'(1) grad rho = S2.
/// Momentum form:  rho_t + div m = 0,   m_t - mu Lap m - (mu+lambda) grad div m + P'(1) grad rho = -div F.
struct NonlinearTerms {
  SpectralField s1;
  SpectralVector s2;
  /// Real-space flux tensor, flux[3 * i + j] = F_ij. Filled by nonlinear_flux only.
  std::array<RealField, 9> flux;
  /// Spectral -div F (row-wise divergence), filled by nonlinear_flux and by the
  /// momentum-form evaluator.
  SpectralVector minus_div_flux;
};

/// S1 = -rho div u - u . grad rho and
/// S2 = -u . grad u - rho/(1+rho) [mu Lap u + (mu+lambda) grad div u] - [P'(1+rho)/(1+rho) - P'(1)] grad rho,
/// from spectral rho and u. Derivatives are spectral, products pointwise. The
/// result is dealiased when `dealias` is set; Nyquist modes are always
/// cleared and the zero mode of S1 is set to 0 (S1 = -div(rho u) has zero mean).
/// Throws PositivityError if 1 + rho <= 0 at a grid point.
void velocity_form_terms(const SpectralGrid& grid, const SpectralField& rho_hat, const SpectralVector& u_hat,
                         const FluidParams& params, bool dealias, SpectralField& s1, SpectralVector& s2);

/// -div F from spectral rho and m, with
///   F = (1+rho) u (x) u + mu grad(rho u) + (mu+lambda) div(rho u) I + (P(1+rho) - P(1) - P'(1) rho) I,
/// (grad w)_ij = d_j w_i. Same dealiasing and Nyquist handling as above.
void momentum_form_terms(const SpectralGrid& grid, const SpectralField& rho_hat, const SpectralVector& m_hat,
                         const FluidParams& params, bool dealias, SpectralVector& minus_div_flux);

/// S1, S2 of a state; the velocity is derived from the momentum.
NonlinearTerms nonlinear_terms_velocity(const PerturbationState& state, const FluidParams& params,
                                        bool dealias = true);

/// The flux tensor F in real space together with -div F in spectral space.
NonlinearTerms nonlinear_flux(const PerturbationState& state, const FluidParams& params, bool dealias = true);

}  // namespace cnsdecay
