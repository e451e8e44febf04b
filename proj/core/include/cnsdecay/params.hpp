#pragma once

#include <cmath>

#include "cnsdecay/errors.hpp"

namespace cnsdecay {

/// Viscosities and pressure law P(rho) = rho^gamma of the barotropic fluid.
struct FluidParams {
  double mu = 1.0;      ///< shear viscosity
  double lambda = 0.0;  ///< second viscosity
  double gamma = 1.0;   ///< adiabatic exponent

  /// Sound-speed coefficient P'(1) = gamma.
  double p_prime_1() const noexcept { return gamma; }
  /// Longitudinal viscosity 2 mu + lambda.
  double nu() const noexcept { return 2.0 * mu + lambda; }

  double pressure(double rho) const { return std::pow(rho, gamma); }
  double pressure_derivative(double rho) const { return gamma * std::pow(rho, gamma - 1.0); }

  /// Throws ConfigError naming the violated constraint.
  void validate() const {
    if (!(mu > 0.0)) throw ConfigError("fluid.mu", "must be positive");
    if (!(2.0 * mu + 3.0 * lambda >= 0.0))
      throw ConfigError("fluid.lambda", "requires 2 mu + 3 lambda >= 0");
    if (!(mu > 0.5 * lambda)) throw ConfigError("fluid.lambda", "requires mu > lambda / 2");
    if (!(gamma >= 1.0)) throw ConfigError("fluid.gamma", "must be >= 1");
  }
};

}  // namespace cnsdecay
