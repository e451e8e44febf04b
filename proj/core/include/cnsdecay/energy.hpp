#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cnsdecay/grid.hpp"
#include "cnsdecay/params.hpp"
#include "cnsdecay/state.hpp"

namespace cnsdecay {

struct EnergyConfig {
  double delta0 = 0.05;  ///< weight of the cross term in E1^2
  /// Fourier splitting constant; 0 selects 6 C1 / (p c_star).
  double R = 0.0;
  double p = 1.0;  ///< integrability index of the data, in [1, 2)

  double c_star(const FluidParams& fp) const noexcept;
  /// Lower equivalence constant (1 - delta0) min(1, P'(1)).
  double c1(const FluidParams& fp) const noexcept;
  /// Upper equivalence constant (1 + delta0) max(1, P'(1)).
  double C1(const FluidParams& fp) const noexcept;
  double splitting_radius_constant(const FluidParams& fp) const noexcept;
  /// Throws ConfigError; requires 0 < delta0 <= min(1, P'(1)) / 2, R >= 0, 1 <= p < 2.
  void validate(const FluidParams& fp) const;
};

struct E1Parts {
  double grad_u_h1_sq = 0.0;    ///< ||grad u||_{H1}^2
  double grad_rho_h1_sq = 0.0;  ///< ||grad rho||_{H1}^2
  double cross = 0.0;           ///< int grad u . grad^2 rho dx
  double value = 0.0;           ///< E1^2
};

/// E1^2 = ||grad u||_{H1}^2 + P'(1) ||grad rho||_{H1}^2 + 2 delta0 int grad u . grad^2 rho.
/// The cross term d_j u_i d_i d_j rho is summed in Fourier space as
/// Re sum -i |k|^2 (k . u_hat) conj(rho_hat).
E1Parts energy_e1(const SpectralGrid& grid, const SpectralField& rho_hat, const SpectralVector& u_hat,
                  const FluidParams& params, const EnergyConfig& config);
E1Parts energy_e1(const PerturbationState& state, const FluidParams& params, const EnergyConfig& config);

struct Dissipation {
  double grad2_u_h1_sq = 0.0;   ///< ||grad^2 u||_{H1}^2
  double grad2_rho_l2_sq = 0.0;  ///< ||grad^2 rho||_{L2}^2
  double total() const noexcept { return grad2_u_h1_sq + grad2_rho_l2_sq; }
};
Dissipation dissipation_terms(const SpectralGrid& grid, const SpectralField& rho_hat, const SpectralVector& u_hat);
Dissipation dissipation_terms(const PerturbationState& state);

struct SplitNorm {
  double low = 0.0;
  double high = 0.0;
  double total() const noexcept;
};

/// Norms split at |xi| <= sqrt(R / (1 + t)).
struct SplitReport {
  double radius = 0.0;
  double a = 0.0;  ///< R / (1 + t)
  std::array<SplitNorm, 4> u;    ///< ||grad^d u||, d = 0..3
  std::array<SplitNorm, 3> rho;  ///< ||grad^d rho||, d = 0..2
  /// Margins lhs - rhs of
  ///   ||grad^2 u||^2 >= a ||grad u||^2 - a^2 ||u||^2,
  ///   ||grad^3 u||^2 >= a ||grad^2 u||^2 - a^2 ||grad u||^2,
  ///   ||grad^2 rho||^2 >= a ||grad rho||^2 - a^2 ||rho||^2,
  /// with the a^2 terms restricted to the low-frequency set (which implies the
  /// unrestricted form). Each margin is >= 0 mode by mode.
  std::array<double, 3> margin{};
  /// Scale of each inequality (sum of magnitudes of its terms), for relative checks.
  std::array<double, 3> scale{};
  bool inequalities_hold(double rel_tol = 1e-12) const noexcept;
};
SplitReport fourier_split_norms(const SpectralGrid& grid, const SpectralField& rho_hat, const SpectralVector& u_hat,
                                double t, double R);
SplitReport fourier_split_norms(const PerturbationState& state, double t, const FluidParams& params,
                                const EnergyConfig& config);

/// ||d_t rho||_{L2} and ||d_t u||_{L2} from the equations (no time differencing):
/// d_t rho = -div u + S1, d_t u = mu Lap u + (mu+lambda) grad div u - P'(1) grad rho + S2.
std::array<double, 2> time_derivative_norms(const SpectralGrid& grid, const SpectralField& rho_hat,
                                            const SpectralVector& u_hat, const FluidParams& params,
                                            bool dealias = true, bool nonlinear = true);
std::array<double, 2> time_derivative_norms(const PerturbationState& state, const FluidParams& params);

/// All tracked quantities at one time. CSV columns follow field order.
struct EnergyReport {
  double t = 0.0;
  double rho_l2 = 0.0;
  double u_l2 = 0.0;
  double grad_rho_h1 = 0.0;
  double grad_u_h1 = 0.0;
  double grad2_u_h1 = 0.0;
  double grad2_rho_l2 = 0.0;
  double e1_sq = 0.0;
  double cross = 0.0;
  SplitNorm split_u, split_grad_u, split_grad2_u, split_rho, split_grad_rho, split_grad2_rho;
  double dt_rho_l2 = 0.0;
  double dt_u_l2 = 0.0;
  double min_density = 1.0;
  bool split_inequalities_ok = true;
  bool e1_equivalence_ok = true;
  bool density_floor_ok = true;
};

/// Builds a report from spectral rho and u (the velocity is given, not derived).
EnergyReport energy_report(const SpectralGrid& grid, double t, const SpectralField& rho_hat,
                           const SpectralVector& u_hat, const FluidParams& params, const EnergyConfig& config,
                           double rho_min, bool dealias = true, bool nonlinear = true);
EnergyReport energy_report(const PerturbationState& state, const FluidParams& params, const EnergyConfig& config,
                           double rho_min);

/// CSV header line (without newline) and one row.
std::string energy_csv_header();
std::string energy_csv_row(const EnergyReport& r);
void write_energy_csv(const std::string& path, const std::vector<EnergyReport>& series);

struct EnergyInequalityReport {
  /// Earliest sample time after which no violation occurs; empty if the last
  /// sample violates.
  std::optional<double> first_time_satisfied;
  double max_violation = 0.0;  ///< largest (residual - tolerance), 0 if none
  std::size_t violations = 0;
  std::vector<double> derivative;  ///< discrete dE1^2/dt per sample
  std::vector<double> residual;    ///< dE1^2/dt + c_star * dissipation per sample
};

/// Checks dE1^2/dt + c_star (||grad^2 u||_{H1}^2 + ||grad^2 rho||_{L2}^2) <= 0
/// with centred differences (one-sided three-point at the ends) on possibly
/// nonuniform samples. A sample violates when the residual exceeds
/// 1e-6 * |E1^2| * max(1, 1/dt). Throws InsufficientDataError for < 3 samples.
EnergyInequalityReport check_energy_inequality(const std::vector<EnergyReport>& series, const FluidParams& params,
                                               const EnergyConfig& config, double rel_tol = 1e-6);

struct WeightedDissipation {
  std::vector<double> running;  ///< int_0^t (1+s)^2 (dissipation) ds at each sample
  double final_value = 0.0;
  /// (I(t_end) - I(t*)) / I(t_end) with 1 + t* = (1 + t_end) / 10.
  double last_decade_growth = 0.0;
  bool plateau = false;
};

/// Trapezoidal accumulation from the first sample. The plateau flag requires
/// relative growth below 1% over the last decade of 1 + t. Throws
/// InsufficientDataError for < 2 samples or a span shorter than one decade.
WeightedDissipation weighted_dissipation_integral(const std::vector<EnergyReport>& series,
                                                  double plateau_tol = 0.01);

}  // namespace cnsdecay
