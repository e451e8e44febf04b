#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <limits>
#include <memory>
#include <new>
#include <vector>

namespace cnsdecay {

using Complex = std::complex<double>;

/// Allocator returning SIMD-aligned storage suitable for FFTW's new-array execute.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::align_val_t alignment{64};

  AlignedAllocator() noexcept = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    if (n > std::numeric_limits<std::size_t>::max() / sizeof(T)) throw std::bad_array_new_length();
    return static_cast<T*>(::operator new(n * sizeof(T), alignment));
  }
  void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, alignment); }

  template <class U>
  bool operator==(const AlignedAllocator<U>&) const noexcept { return true; }
};

using RealField = std::vector<double, AlignedAllocator<double>>;
using SpectralField = std::vector<Complex, AlignedAllocator<Complex>>;
using RealVector = std::array<RealField, 3>;
using SpectralVector = std::array<SpectralField, 3>;

/// Sets the thread count FFTW uses for plans created afterwards.
void set_fft_threads(int threads);
/// Version string of the linked FFT library.
const char* fft_library_version() noexcept;

/// Periodic cube [0, L)^3 sampled on N^3 points, with the matching half-complex
/// spectral layout N x N x (N/2 + 1).
///
/// Spectral coefficients use the unitary convention
///   f_hat(k) = L^{3/2} / N^3 * sum_x f(x) exp(-i k.x),
/// so that sum over all modes |f_hat|^2 equals the integral of |f|^2 over the box.
/// Only the half spectrum is stored; plancherel_weight() accounts for the
/// implied conjugate partners.
///
/// Copies share the FFT plans and the wavenumber tables; all members are const
/// after construction so a grid may be used from several threads.
class SpectralGrid {
 public:
  SpectralGrid(double box_length, int points_per_axis);

  double box_length() const noexcept { return length_; }
  int points() const noexcept { return n_; }
  int half_points() const noexcept { return n_ / 2 + 1; }
  std::size_t real_size() const noexcept { return real_size_; }
  std::size_t spectral_size() const noexcept { return spectral_size_; }
  /// Smallest nonzero wavenumber magnitude 2 pi / L.
  double fundamental() const noexcept { return fundamental_; }
  double cell_volume() const noexcept { return cell_volume_; }
  double spacing() const noexcept { return length_ / n_; }
  /// Largest retained |k_i| index under the two-thirds rule.
  int dealias_cutoff_index() const noexcept { return n_ / 3; }
  /// Wavenumber magnitude corresponding to dealias_cutoff_index().
  double dealias_cutoff() const noexcept { return fundamental_ * (n_ / 3); }

  std::size_t real_index(int i, int j, int l) const noexcept {
    return (static_cast<std::size_t>(i) * n_ + j) * n_ + l;
  }
  std::size_t spectral_index(int i, int j, int l) const noexcept {
    return (static_cast<std::size_t>(i) * n_ + j) * half_points() + l;
  }

  /// Signed integer mode number of array position i along a full axis, in [-N/2, N/2).
  int signed_mode(int i) const noexcept { return i <= n_ / 2 - 1 ? i : i - n_; }

  /// Integer mode triple of a spectral slot, Nyquist entries reported as -N/2.
  std::array<int, 3> mode(std::size_t spectral_index) const noexcept;

  /// Wavevector used for differentiation. Nyquist components are set to 0 so
  /// that odd derivatives of real fields stay real.
  std::array<double, 3> wavevector(std::size_t idx) const noexcept {
    return {kx_[idx], ky_[idx], kz_[idx]};
  }
  double wavenumber_sq(std::size_t idx) const noexcept { return k2_[idx]; }
  /// Integer squared radius n1^2 + n2^2 + n3^2 of the differentiation wavevector.
  int shell(std::size_t idx) const noexcept { return shell_[idx]; }
  int max_shell() const noexcept { return 3 * (n_ / 2) * (n_ / 2); }
  /// 1 for slots on the l = 0 and l = N/2 planes, 2 elsewhere.
  double plancherel_weight(std::size_t idx) const noexcept { return weight_[idx]; }
  /// True if any |n_i| equals N/2.
  bool is_nyquist(std::size_t idx) const noexcept { return nyquist_[idx] != 0; }
  /// True if every |n_i| <= N/3.
  bool retained_by_dealias(std::size_t idx) const noexcept { return keep_[idx] != 0; }

  RealField zeros_real() const { return RealField(real_size_, 0.0); }
  SpectralField zeros_spectral() const { return SpectralField(spectral_size_, Complex{}); }

  /// Throws DimensionError on size mismatch.
  void forward(const RealField& field, SpectralField& out) const;
  SpectralField forward(const RealField& field) const;
  void inverse(const SpectralField& coeffs, RealField& out) const;
  RealField inverse(const SpectralField& coeffs) const;

  void check(const RealField& field) const;
  void check(const SpectralField& coeffs) const;

  bool same_as(const SpectralGrid& other) const noexcept {
    return n_ == other.n_ && length_ == other.length_;
  }

 private:
  struct Plans;

  double length_;
  int n_;
  std::size_t real_size_;
  std::size_t spectral_size_;
  double fundamental_;
  double cell_volume_;
  double forward_scale_;
  double inverse_scale_;
  std::shared_ptr<const Plans> plans_;
  std::shared_ptr<const std::vector<double>> kx_store_, ky_store_, kz_store_, k2_store_, weight_store_;
  std::shared_ptr<const std::vector<int>> shell_store_;
  std::shared_ptr<const std::vector<unsigned char>> nyquist_store_, keep_store_;
  const double* kx_ = nullptr;
  const double* ky_ = nullptr;
  const double* kz_ = nullptr;
  const double* k2_ = nullptr;
  const double* weight_ = nullptr;
  const int* shell_ = nullptr;
  const unsigned char* nyquist_ = nullptr;
  const unsigned char* keep_ = nullptr;
};

/// Zeroes every mode with some |n_i| > N/3 (two-thirds rule).
SpectralField dealias(SpectralField coeffs, const SpectralGrid& grid);
void dealias_in_place(SpectralField& coeffs, const SpectralGrid& grid);
/// Zeroes the Nyquist planes only.
void remove_nyquist(SpectralField& coeffs, const SpectralGrid& grid);

/// Spectral derivative i k_axis f_hat.
SpectralField derivative(const SpectralField& coeffs, const SpectralGrid& grid, int axis);
/// Spectral Laplacian -|k|^2 f_hat.
SpectralField laplacian(const SpectralField& coeffs, const SpectralGrid& grid);
/// i k . v_hat.
SpectralField divergence(const SpectralVector& v, const SpectralGrid& grid);
std::array<SpectralField, 3> gradient(const SpectralField& coeffs, const SpectralGrid& grid);

/// Sum over all modes of |k|^{2d} |f_hat|^2, i.e. the squared L2 norm of the
/// d-th derivative tensor. Summation order is fixed (storage order).
double derivative_norm_sq(const SpectralField& coeffs, const SpectralGrid& grid, int order);
double derivative_norm_sq(const SpectralVector& coeffs, const SpectralGrid& grid, int order);
/// Real inner product of two fields computed spectrally.
double inner_product(const SpectralField& a, const SpectralField& b, const SpectralGrid& grid);

/// Real-space quadrature helpers (midpoint rule on the grid).
double integral(const RealField& f, const SpectralGrid& grid);
double lp_norm(const RealField& f, const SpectralGrid& grid, double p);
double lp_norm(const RealVector& v, const SpectralGrid& grid, double p);

}  // namespace cnsdecay
