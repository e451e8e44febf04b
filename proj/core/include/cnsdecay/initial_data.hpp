#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "cnsdecay/continuum.hpp"
#include "cnsdecay/grid.hpp"
#include "cnsdecay/params.hpp"
#include "cnsdecay/state.hpp"

namespace cnsdecay {

enum class DataKind {
  theorem13,       ///< Gaussian density bump, zero momentum, |rho_hat| >= c0 for |xi| <= k_cut
  generic_eta,     ///< random phases, envelope vanishing like |xi|^eta at the origin
  solenoidal,      ///< rho = 0, divergence-free momentum
  custom_profile,  ///< radial (k/w)^eta exp(-(k/w)^q / 2) density with longitudinal momentum
};

const char* to_string(DataKind k) noexcept;
/// Parses the names used in config files ("theorem13", "generic-eta", ...); throws ConfigError.
DataKind parse_data_kind(const std::string& name);

struct InitialDataSpec {
  DataKind kind = DataKind::theorem13;
  /// Floor for |rho_hat_0| in the continuum normalisation (grid coefficient
  /// divided by (2 pi / L)^{3/2}), required for 0 < |xi| <= k_cut.
  double c0 = 1e-6;
  double k_cut = 0.5;
  /// Envelope width in frequency; 0 means k_cut.
  double width = 0.0;
  /// max |rho_0| over the grid (max |m_0| for solenoidal data).
  double amplitude = 0.1;
  /// Momentum envelope relative to the density envelope (generic and custom kinds).
  double momentum_ratio = 1.0;
  double eta = 0.0;
  std::uint64_t seed = 1;
  /// Generated data must satisfy 1 + rho_0 >= density_floor.
  double density_floor = 0.1;
  /// Exponent q of the custom envelope.
  double profile_power = 2.0;

  double envelope_width() const noexcept { return width > 0.0 ? width : k_cut; }
  /// Throws ConfigError naming the initial.* key; k_cut must lie below the
  /// grid's dealiasing cutoff.
  void validate(const SpectralGrid& grid) const;
};

struct GeneratedData {
  PerturbationState state;
  /// Continuum counterpart for the radial kinds (theorem13, custom-profile).
  std::optional<RadialProfileData> profile;
  /// Factor applied to the unit-amplitude shape.
  double scale = 0.0;
};

/// Builds the data spectrally on the modes kept by the two-thirds rule, with
/// conjugate symmetry and a zero mean density. Throws InitialDataError when the
/// amplitude would push 1 + rho_0 below density_floor (reporting the largest
/// admissible amplitude) or when the theorem13 floor c0 is not met.
GeneratedData generate(const InitialDataSpec& spec, const SpectralGrid& grid);

/// L2 norm of the difference between two evaluations of d_t u at t = 0:
///   -u.grad u - (1/rho) L u - (1/rho) grad rho^gamma,  L u = -mu Lap u - (mu+lambda) grad div u,
/// and the perturbation form mu Lap u + (mu+lambda) grad div u - P'(1) grad rho + S2.
/// Both use the same spectral derivatives and no dealiasing, so the result is
/// zero up to roundoff for gamma = 1 and up to discretisation error otherwise.
/// Throws PositivityError if 1 + rho_0 <= 0.
double admissible_residual(const RealField& rho0, const RealVector& u0, const SpectralGrid& grid,
                           const FluidParams& params);

struct NormReport {
  double rho_l1 = 0.0, rho_l2 = 0.0, rho_h1 = 0.0, rho_h2 = 0.0;
  double u_l1 = 0.0, u_l2 = 0.0, u_h1 = 0.0, u_h2 = 0.0;
};

/// L1 by grid quadrature, the others by Plancherel sums.
NormReport norm_report(const PerturbationState& state);

}  // namespace cnsdecay
