#include "cnsdecay/symbol.hpp"

#include <cmath>

#include "cnsdecay/errors.hpp"

namespace cnsdecay {

namespace {

using Complex = std::complex<double>;
constexpr Complex kI{0.0, 1.0};

// cosh(sqrt(x)) and sinh(sqrt(x)) / sqrt(x) as power series in x.
void even_odd_series(double x, double& even, double& odd) {
  double term_even = 1.0;
  double term_odd = 1.0;
  even = 1.0;
  odd = 1.0;
  for (int n = 1; n < 60; ++n) {
    term_even *= x / ((2.0 * n - 1.0) * (2.0 * n));
    term_odd *= x / ((2.0 * n) * (2.0 * n + 1.0));
    even += term_even;
    odd += term_odd;
    if (std::abs(term_even) <= 1e-18 * std::abs(even) && std::abs(term_odd) <= 1e-18 * std::abs(odd))
      break;
  }
}

using Matrix6 = Eigen::Matrix<double, 6, 6>;

Matrix6 expm_taylor(const Matrix6& m) {
  const double norm = m.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Matrix6 a = m / std::ldexp(1.0, squarings);
  Matrix6 result = Matrix6::Identity();
  Matrix6 term = Matrix6::Identity();
  for (int n = 1; n <= 24; ++n) {
    term = term * a / static_cast<double>(n);
    result += term;
    if (term.cwiseAbs().maxCoeff() <= 1e-18 * result.cwiseAbs().maxCoeff()) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

}  // namespace

Matrix4c symbol(const Eigen::Vector3d& xi, const FluidParams& params) {
  const double k2 = xi.squaredNorm();
  const double pp = params.p_prime_1();
  Matrix4c b = Matrix4c::Zero();
  for (int j = 0; j < 3; ++j) {
    b(0, j + 1) = -kI * xi[j];
    b(j + 1, 0) = -kI * pp * xi[j];
    for (int l = 0; l < 3; ++l) {
      double v = -(params.mu + params.lambda) * xi[j] * xi[l];
      if (j == l) v -= params.mu * k2;
      b(j + 1, l + 1) = v;
    }
  }
  return b;
}

bool AcousticPair::degenerate() const noexcept {
  return std::abs(half_gap_sq) <= kDegenerateRelativeGap * kDegenerateRelativeGap * center * center;
}

std::complex<double> AcousticPair::lambda_plus() const noexcept {
  if (half_gap_sq >= 0.0) {
    const double delta = std::sqrt(half_gap_sq);
    const double minus = center - delta;
    // c + delta suffers cancellation for overdamped pairs; use the product.
    return minus != 0.0 ? Complex(product / minus, 0.0) : Complex(center + delta, 0.0);
  }
  return {center, std::sqrt(-half_gap_sq)};
}

std::complex<double> AcousticPair::lambda_minus() const noexcept {
  if (half_gap_sq >= 0.0) return {center - std::sqrt(half_gap_sq), 0.0};
  return {center, -std::sqrt(-half_gap_sq)};
}

AcousticPair acoustic_pair(double k, const FluidParams& params) noexcept {
  const double nu = params.nu();
  const double pp = params.p_prime_1();
  AcousticPair p;
  p.k = k;
  p.center = -0.5 * nu * k * k;
  p.half_gap_sq = k * k * (0.25 * nu * nu * k * k - pp);
  p.product = pp * k * k;
  return p;
}

AcousticKernel acoustic_kernel(const AcousticPair& pair, double t) noexcept {
  if (t == 0.0) return {1.0, 0.0};
  const double c = pair.center;
  const double d2 = pair.half_gap_sq;
  const double z2 = d2 * t * t;
  if ((pair.degenerate() && std::abs(z2) < 16.0) || z2 == 0.0) {
    double even = 1.0, odd = 1.0;
    even_odd_series(z2, even, odd);
    const double ect = std::exp(c * t);
    return {ect * even, t * ect * odd};
  }
  if (d2 < 0.0) {
    const double omega = std::sqrt(-d2);
    const double ect = std::exp(c * t);
    return {ect * std::cos(omega * t), ect * std::sin(omega * t) / omega};
  }
  const double delta = std::sqrt(d2);
  if (delta * t < 1.0) {
    const double ect = std::exp(c * t);
    return {ect * std::cosh(delta * t), ect * std::sinh(delta * t) / delta};
  }
  // Overdamped: combine the two real exponentials directly so that neither
  // e^{ct} nor cosh(delta t) is formed on its own.
  const double lam_minus = c - delta;
  const double lam_plus = pair.product / lam_minus;
  const double e_plus = std::exp(lam_plus * t);
  const double e_minus = std::exp(lam_minus * t);
  return {0.5 * (e_plus + e_minus), -e_plus * std::expm1(-2.0 * delta * t) / (2.0 * delta)};
}

Block2 acoustic_exp(double k, const FluidParams& params, double t) noexcept {
  const AcousticPair pair = acoustic_pair(k, params);
  const AcousticKernel ker = acoustic_kernel(pair, t);
  const double half_nu_k2 = -pair.center;
  Block2 b;
  b.f11 = ker.even + ker.odd * half_nu_k2;
  b.f12 = ker.odd * k;
  b.f21 = -ker.odd * params.p_prime_1() * k;
  b.f22 = ker.even - ker.odd * half_nu_k2;
  return b;
}

std::array<Block2, 3> acoustic_phi_functions(double k, const FluidParams& params, double h) {
  Matrix6 m = Matrix6::Zero();
  m(0, 1) = h * k;
  m(1, 0) = -h * params.p_prime_1() * k;
  m(1, 1) = -h * params.nu() * k * k;
  m(0, 2) = 1.0;
  m(1, 3) = 1.0;
  m(2, 4) = 1.0;
  m(3, 5) = 1.0;
  const Matrix6 e = expm_taylor(m);
  std::array<Block2, 3> out;
  for (int j = 0; j < 3; ++j) {
    const int c0 = 2 * j;
    out[static_cast<std::size_t>(j)] = {e(0, c0), e(0, c0 + 1), e(1, c0), e(1, c0 + 1)};
  }
  return out;
}

double phi_scalar(double z, int order) noexcept {
  if (std::abs(z) < 0.5) {
    // sum_n z^n / (n + order)!
    double denom = 1.0;
    for (int i = 2; i <= order; ++i) denom *= i;
    double term = 1.0 / denom;
    double sum = term;
    for (int n = 1; n < 40; ++n) {
      term *= z / (n + order);
      sum += term;
      if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  switch (order) {
    case 0: return std::exp(z);
    case 1: return std::expm1(z) / z;
    default: return (std::expm1(z) - z) / (z * z);
  }
}

ModeDecomposition eigenmodes(const Eigen::Vector3d& xi, const FluidParams& params) {
  const double k = xi.norm();
  if (k == 0.0) throw ZeroFrequencyError();
  ModeDecomposition d;
  d.xi = xi;
  d.k = k;
  d.solenoidal_eigenvalue = -params.mu * k * k;
  d.acoustic = acoustic_pair(k, params);
  d.symbol = symbol(xi, params);

  const Eigen::Vector3d xhat = xi / k;
  d.solenoidal_projector = Matrix4c::Zero();
  const Eigen::Matrix3d perp = Eigen::Matrix3d::Identity() - xhat * xhat.transpose();
  d.solenoidal_projector.block<3, 3>(1, 1) = perp.cast<Complex>();
  d.acoustic_projector = Matrix4c::Identity() - d.solenoidal_projector;
  d.acoustic_shift = (d.symbol - d.acoustic.center * Matrix4c::Identity()) * d.acoustic_projector;

  if (!d.acoustic.degenerate()) {
    const Complex delta = std::sqrt(Complex(d.acoustic.half_gap_sq, 0.0));
    d.plus_projector = 0.5 * d.acoustic_projector + d.acoustic_shift / (2.0 * delta);
    d.minus_projector = 0.5 * d.acoustic_projector - d.acoustic_shift / (2.0 * delta);
  }
  return d;
}

Matrix4c ModeDecomposition::reconstruct() const {
  Matrix4c b = solenoidal_eigenvalue * solenoidal_projector;
  if (plus_projector && minus_projector) {
    b += lambda_plus() * *plus_projector + lambda_minus() * *minus_projector;
  } else {
    b += acoustic.center * acoustic_projector + acoustic_shift;
  }
  return b;
}

Matrix4c ModeDecomposition::exp(double t) const {
  if (t < 0.0) throw DomainError("semigroup time must be nonnegative");
  const AcousticKernel ker = acoustic_kernel(acoustic, t);
  return std::exp(solenoidal_eigenvalue * t) * solenoidal_projector + ker.even * acoustic_projector +
         ker.odd * acoustic_shift;
}

Matrix4c semigroup_symbol(const Eigen::Vector3d& xi, const FluidParams& params, double t) {
  if (t < 0.0) throw DomainError("semigroup time must be nonnegative");
  if (xi.squaredNorm() == 0.0) return Matrix4c::Identity();
  return eigenmodes(xi, params).exp(t);
}

}  // namespace cnsdecay
