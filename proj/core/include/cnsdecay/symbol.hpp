#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <optional>

#include "cnsdecay/params.hpp"

namespace cnsdecay {

using Matrix4c = Eigen::Matrix<std::complex<double>, 4, 4>;
using Vector4c = Eigen::Matrix<std::complex<double>, 4, 1>;

/// Relative distance |lambda+ - lambda-| / |lambda+ + lambda-| below which the
/// acoustic pair is treated as a double root.
inline constexpr double kDegenerateRelativeGap = 1e-6;

/// Fourier symbol of the linearised operator acting on (rho_hat, m_hat):
///
///   [ 0            -i xi^T                          ]
///   [ -i P'(1) xi  -mu |xi|^2 I - (mu + lambda) xi xi^T ]
Matrix4c symbol(const Eigen::Vector3d& xi, const FluidParams& params);

/// Real 2x2 matrix f(A_r) of the acoustic block written in the variables
/// (rho_hat, q) with q = -i (xi/|xi|) . m_hat, where
///   A_r = [[0, k], [-P'(1) k, -nu k^2]],  nu = 2 mu + lambda.
/// Back in (rho_hat, m_par) this acts as
///   rho' = f11 rho - i f12 m_par,   m_par' = i f21 rho + f22 m_par.
struct Block2 {
  double f11 = 1.0, f12 = 0.0, f21 = 0.0, f22 = 1.0;
};

/// Scalars describing the acoustic pair at wavenumber k: the eigenvalues are
/// center +- sqrt(half_gap_sq).
struct AcousticPair {
  double k = 0.0;
  double center = 0.0;       ///< -nu k^2 / 2
  double half_gap_sq = 0.0;  ///< nu^2 k^4 / 4 - P'(1) k^2
  double product = 0.0;      ///< P'(1) k^2 = lambda+ lambda-

  bool degenerate() const noexcept;
  std::complex<double> lambda_plus() const noexcept;
  std::complex<double> lambda_minus() const noexcept;
};

AcousticPair acoustic_pair(double k, const FluidParams& params) noexcept;

/// e^{tA} restricted to the acoustic block equals even * I + odd * (A - center I),
/// where even = e^{ct} cosh(t delta) and odd = e^{ct} sinh(t delta) / delta.
/// Evaluated without overflow for stiff overdamped pairs and by a power series
/// within kDegenerateRelativeGap of the double root.
struct AcousticKernel {
  double even = 1.0;
  double odd = 0.0;
};
AcousticKernel acoustic_kernel(const AcousticPair& pair, double t) noexcept;

/// Closed-form e^{tA_r}.
Block2 acoustic_exp(double k, const FluidParams& params, double t) noexcept;

/// phi_j(h A_r) for j = 0 (exponential), 1, 2, via the exponential of the
/// augmented block matrix [[hA, I, 0], [0, 0, I], [0, 0, 0]]. Valid uniformly,
/// including at the double root and at k = 0.
std::array<Block2, 3> acoustic_phi_functions(double k, const FluidParams& params, double h);

/// phi_j(z) = sum_n z^n / (n + j)!  for j = 0, 1, 2.
double phi_scalar(double z, int order) noexcept;

/// Explicit diagonalisation of the symbol at a nonzero wavevector.
struct ModeDecomposition {
  Eigen::Vector3d xi;
  double k = 0.0;
  double solenoidal_eigenvalue = 0.0;  ///< -mu |xi|^2, multiplicity 2
  AcousticPair acoustic;
  Matrix4c symbol;
  Matrix4c solenoidal_projector;  ///< onto {rho = 0, m perpendicular to xi}
  Matrix4c acoustic_projector;    ///< onto span{rho, m parallel to xi}
  /// (B - center I) P_acoustic; squares to half_gap_sq * P_acoustic.
  Matrix4c acoustic_shift;
  /// Spectral projectors of lambda+ and lambda-; absent at the double root,
  /// where the acoustic block is a Jordan block.
  std::optional<Matrix4c> plus_projector;
  std::optional<Matrix4c> minus_projector;

  std::complex<double> lambda_plus() const noexcept { return acoustic.lambda_plus(); }
  std::complex<double> lambda_minus() const noexcept { return acoustic.lambda_minus(); }
  bool degenerate() const noexcept { return acoustic.degenerate(); }

  /// sum_i lambda_i P_i (with the nilpotent part at the double root).
  Matrix4c reconstruct() const;
  /// e^{tB} from the decomposition.
  Matrix4c exp(double t) const;
};

/// Throws ZeroFrequencyError for xi = 0.
ModeDecomposition eigenmodes(const Eigen::Vector3d& xi, const FluidParams& params);

/// e^{tB(xi)} in closed form; the zero wavevector gives the identity.
Matrix4c semigroup_symbol(const Eigen::Vector3d& xi, const FluidParams& params, double t);

}  // namespace cnsdecay
