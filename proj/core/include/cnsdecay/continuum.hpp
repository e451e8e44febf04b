#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cnsdecay/decay_fit.hpp"
#include "cnsdecay/params.hpp"

namespace cnsdecay {

/// Isotropic initial data in continuous frequency space. The transform is the
/// unitary one on R^3, f_hat(xi) = (2 pi)^{-3/2} int f(x) e^{-i xi.x} dx, so
/// the L2 norm of f is the L2 norm of f_hat.
///
/// The momentum is described by its component along xi/|xi| (m_long) and the
/// magnitude of its transverse part (m_sol). An empty function is read as 0.
struct RadialProfileData {
  std::function<std::complex<double>(double)> rho_hat;
  std::function<std::complex<double>(double)> m_long;
  std::function<double(double)> m_sol;
  /// Profiles are treated as zero for |xi| > cutoff.
  double cutoff = 0.0;
  /// Length scale in frequency over which the profiles vary; sets panel sizes.
  double scale = 0.0;
  /// Order to which the data vanish at xi = 0.
  double eta = 0.0;
  /// True when |rho_hat| >= c0 > 0 and m_hat = 0 near the origin, which
  /// enables the lower-bound check.
  bool low_frequency_floor = false;
  std::string description;
};

/// rho_hat = a exp(-k^2 / (2 w^2)), m_hat = 0, floor flag set.
RadialProfileData floor_gaussian_profile(double amplitude, double width);

/// rho_hat = a (k/w)^eta e^{-k^2/(2w^2)}, m_long = i * long_ratio * the same
/// envelope, m_sol = sol_ratio * the same envelope magnitude.
RadialProfileData vanishing_gaussian_profile(double amplitude, double width, double eta, double long_ratio = 1.0,
                                             double sol_ratio = 1.0);

struct ContinuumNorms {
  double rho = 0.0;   ///< ||grad^d rho_l(t)||_{L2}
  double m = 0.0;     ///< ||grad^d m_l(t)||_{L2}
  /// ||(rho_l, m_l)|| = ||rho_l|| + ||m_l||.
  double pair() const noexcept { return rho + m; }
  /// Estimated relative quadrature error of the larger of the two integrals.
  double relative_error = 0.0;
};

inline constexpr double kContinuumRelTol = 1e-8;

/// ||grad^d (rho_l, m_l)(t)||_{L2} for the linear evolution of the profile,
/// as 4 pi int k^{2+2d} |e^{tB}(...)(k)|^2 dk by panelled adaptive
/// Gauss-Kronrod quadrature. Throws QuadratureError when the estimated
/// relative error exceeds rel_tol.
ContinuumNorms linear_l2_norm_continuum(const RadialProfileData& data, const FluidParams& params, double t,
                                        int derivative_order = 0, double rel_tol = kContinuumRelTol);

struct LinearDecayCheck {
  std::vector<double> times;
  std::vector<double> rho;
  std::vector<double> m;
  DecayFitResult rho_upper;
  DecayFitResult m_upper;
  /// Present only when data.low_frequency_floor is set.
  std::optional<DecayFitResult> rho_lower;
  std::optional<DecayFitResult> m_lower;
  bool degenerate_input = false;
  bool pass = false;
};

/// Samples the continuum norms at `samples` log-spaced times in the window and
/// fits both components. The upper check compares against
/// -(3/4 + eta/2 + d/2); the lower check, only for floor data, against -3/4 - d/2.
LinearDecayCheck verify_linear_decay(const RadialProfileData& data, const FluidParams& params, double eta,
                                     FitWindow window, std::size_t samples = 30, double tolerance = 0.05,
                                     int derivative_order = 0);

}  // namespace cnsdecay
