#include "cnsdecay/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "cnsdecay/errors.hpp"

namespace cnsdecay {

namespace {

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

int g_fft_threads = 1;
bool g_threads_initialised = false;

}  // namespace

const char* fft_library_version() noexcept { return fftw_version; }

void set_fft_threads(int threads) {
  std::lock_guard lock(planner_mutex());
  threads = std::max(1, threads);
  if (!g_threads_initialised) {
    fftw_init_threads();
    g_threads_initialised = true;
  }
  g_fft_threads = threads;
  fftw_plan_with_nthreads(threads);
}

struct SpectralGrid::Plans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;

  explicit Plans(int n) {
    std::lock_guard lock(planner_mutex());
    const std::size_t real_size = static_cast<std::size_t>(n) * n * n;
    const std::size_t spec_size = static_cast<std::size_t>(n) * n * (n / 2 + 1);
    double* r = fftw_alloc_real(real_size);
    fftw_complex* c = fftw_alloc_complex(spec_size);
    // FFTW_ESTIMATE keeps the chosen algorithm, and therefore the rounding,
    // identical from run to run.
    forward = fftw_plan_dft_r2c_3d(n, n, n, r, c, FFTW_ESTIMATE);
    inverse = fftw_plan_dft_c2r_3d(n, n, n, c, r, FFTW_ESTIMATE | FFTW_DESTROY_INPUT);
    fftw_free(r);
    fftw_free(c);
    if (!forward || !inverse) throw Error("FFTW planning failed");
  }
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(inverse);
  }
  Plans(const Plans&) = delete;
  Plans& operator=(const Plans&) = delete;
};

SpectralGrid::SpectralGrid(double box_length, int points_per_axis)
    : length_(box_length), n_(points_per_axis) {
  if (!(box_length > 0.0) || !std::isfinite(box_length))
    throw ConfigError("grid.L", "box length must be positive and finite");
  if (points_per_axis < 8 || points_per_axis % 2 != 0)
    throw ConfigError("grid.N", "points per axis must be even and >= 8");

  real_size_ = static_cast<std::size_t>(n_) * n_ * n_;
  spectral_size_ = static_cast<std::size_t>(n_) * n_ * (n_ / 2 + 1);
  fundamental_ = 2.0 * std::numbers::pi / length_;
  cell_volume_ = std::pow(length_ / n_, 3);
  forward_scale_ = std::pow(length_, 1.5) / static_cast<double>(real_size_);
  inverse_scale_ = std::pow(length_, -1.5);
  plans_ = std::make_shared<const Plans>(n_);

  auto kx = std::make_shared<std::vector<double>>(spectral_size_);
  auto ky = std::make_shared<std::vector<double>>(spectral_size_);
  auto kz = std::make_shared<std::vector<double>>(spectral_size_);
  auto k2 = std::make_shared<std::vector<double>>(spectral_size_);
  auto w = std::make_shared<std::vector<double>>(spectral_size_);
  auto sh = std::make_shared<std::vector<int>>(spectral_size_);
  auto ny = std::make_shared<std::vector<unsigned char>>(spectral_size_);
  auto keep = std::make_shared<std::vector<unsigned char>>(spectral_size_);

  const int nh = n_ / 2;
  const int cut = n_ / 3;
  auto eff = [nh](int m) { return (m == -nh || m == nh) ? 0 : m; };
  for (int i = 0; i < n_; ++i) {
    const int mi = signed_mode(i);
    for (int j = 0; j < n_; ++j) {
      const int mj = signed_mode(j);
      for (int l = 0; l <= nh; ++l) {
        const std::size_t idx = spectral_index(i, j, l);
        const int ei = eff(mi), ej = eff(mj), el = eff(l);
        (*kx)[idx] = fundamental_ * ei;
        (*ky)[idx] = fundamental_ * ej;
        (*kz)[idx] = fundamental_ * el;
        (*sh)[idx] = ei * ei + ej * ej + el * el;
        (*k2)[idx] = fundamental_ * fundamental_ * (*sh)[idx];
        (*w)[idx] = (l == 0 || l == nh) ? 1.0 : 2.0;
        const bool nyq = (mi == -nh) || (mj == -nh) || (l == nh);
        (*ny)[idx] = nyq ? 1 : 0;
        const bool kept = std::abs(mi) <= cut && std::abs(mj) <= cut && l <= cut;
        (*keep)[idx] = kept ? 1 : 0;
      }
    }
  }
  kx_ = kx->data();
  ky_ = ky->data();
  kz_ = kz->data();
  k2_ = k2->data();
  weight_ = w->data();
  shell_ = sh->data();
  nyquist_ = ny->data();
  keep_ = keep->data();
  kx_store_ = std::move(kx);
  ky_store_ = std::move(ky);
  kz_store_ = std::move(kz);
  k2_store_ = std::move(k2);
  weight_store_ = std::move(w);
  shell_store_ = std::move(sh);
  nyquist_store_ = std::move(ny);
  keep_store_ = std::move(keep);
}

std::array<int, 3> SpectralGrid::mode(std::size_t idx) const noexcept {
  const std::size_t hp = static_cast<std::size_t>(half_points());
  const int l = static_cast<int>(idx % hp);
  const std::size_t rest = idx / hp;
  const int j = static_cast<int>(rest % n_);
  const int i = static_cast<int>(rest / n_);
  const int ml = (l == n_ / 2) ? -n_ / 2 : l;
  return {signed_mode(i), signed_mode(j), ml};
}

void SpectralGrid::check(const RealField& field) const {
  if (field.size() != real_size_)
    throw DimensionError("real field has " + std::to_string(field.size()) + " samples, grid expects " +
                         std::to_string(real_size_));
}

void SpectralGrid::check(const SpectralField& coeffs) const {
  if (coeffs.size() != spectral_size_)
    throw DimensionError("spectral field has " + std::to_string(coeffs.size()) +
                         " coefficients, grid expects " + std::to_string(spectral_size_));
}

void SpectralGrid::forward(const RealField& field, SpectralField& out) const {
  check(field);
  out.resize(spectral_size_);
  // r2c leaves its input untouched for out-of-place transforms.
  fftw_execute_dft_r2c(plans_->forward, const_cast<double*>(field.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
  for (auto& c : out) c *= forward_scale_;
}

SpectralField SpectralGrid::forward(const RealField& field) const {
  SpectralField out(spectral_size_);
  forward(field, out);
  return out;
}

void SpectralGrid::inverse(const SpectralField& coeffs, RealField& out) const {
  check(coeffs);
  SpectralField scratch(coeffs);
  out.resize(real_size_);
  fftw_execute_dft_c2r(plans_->inverse, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
  for (auto& v : out) v *= inverse_scale_;
}

RealField SpectralGrid::inverse(const SpectralField& coeffs) const {
  RealField out(real_size_);
  inverse(coeffs, out);
  return out;
}

void dealias_in_place(SpectralField& coeffs, const SpectralGrid& grid) {
  grid.check(coeffs);
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (!grid.retained_by_dealias(i)) coeffs[i] = Complex{};
}

SpectralField dealias(SpectralField coeffs, const SpectralGrid& grid) {
  dealias_in_place(coeffs, grid);
  return coeffs;
}

void remove_nyquist(SpectralField& coeffs, const SpectralGrid& grid) {
  grid.check(coeffs);
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (grid.is_nyquist(i)) coeffs[i] = Complex{};
}

SpectralField derivative(const SpectralField& coeffs, const SpectralGrid& grid, int axis) {
  grid.check(coeffs);
  SpectralField out(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const double k = grid.wavevector(i)[static_cast<std::size_t>(axis)];
    out[i] = Complex(-k * coeffs[i].imag(), k * coeffs[i].real());
  }
  return out;
}

SpectralField laplacian(const SpectralField& coeffs, const SpectralGrid& grid) {
  grid.check(coeffs);
  SpectralField out(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) out[i] = -grid.wavenumber_sq(i) * coeffs[i];
  return out;
}

SpectralField divergence(const SpectralVector& v, const SpectralGrid& grid) {
  for (const auto& c : v) grid.check(c);
  SpectralField out(grid.spectral_size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto k = grid.wavevector(i);
    const Complex s = k[0] * v[0][i] + k[1] * v[1][i] + k[2] * v[2][i];
    out[i] = Complex(-s.imag(), s.real());
  }
  return out;
}

std::array<SpectralField, 3> gradient(const SpectralField& coeffs, const SpectralGrid& grid) {
  return {derivative(coeffs, grid, 0), derivative(coeffs, grid, 1), derivative(coeffs, grid, 2)};
}

double derivative_norm_sq(const SpectralField& coeffs, const SpectralGrid& grid, int order) {
  grid.check(coeffs);
  double sum = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    double w = grid.plancherel_weight(i) * std::norm(coeffs[i]);
    const double k2 = grid.wavenumber_sq(i);
    for (int d = 0; d < order; ++d) w *= k2;
    sum += w;
  }
  return sum;
}

double derivative_norm_sq(const SpectralVector& coeffs, const SpectralGrid& grid, int order) {
  return derivative_norm_sq(coeffs[0], grid, order) + derivative_norm_sq(coeffs[1], grid, order) +
         derivative_norm_sq(coeffs[2], grid, order);
}

double inner_product(const SpectralField& a, const SpectralField& b, const SpectralGrid& grid) {
  grid.check(a);
  grid.check(b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    sum += grid.plancherel_weight(i) * (a[i].real() * b[i].real() + a[i].imag() * b[i].imag());
  return sum;
}

double integral(const RealField& f, const SpectralGrid& grid) {
  grid.check(f);
  double sum = 0.0;
  for (double v : f) sum += v;
  return sum * grid.cell_volume();
}

double lp_norm(const RealField& f, const SpectralGrid& grid, double p) {
  grid.check(f);
  double sum = 0.0;
  if (std::isinf(p)) {
    for (double v : f) sum = std::max(sum, std::abs(v));
    return sum;
  }
  for (double v : f) sum += std::pow(std::abs(v), p);
  return std::pow(sum * grid.cell_volume(), 1.0 / p);
}

double lp_norm(const RealVector& v, const SpectralGrid& grid, double p) {
  for (const auto& c : v) grid.check(c);
  double sum = 0.0;
  const bool sup = std::isinf(p);
  for (std::size_t i = 0; i < v[0].size(); ++i) {
    const double mag = std::sqrt(v[0][i] * v[0][i] + v[1][i] * v[1][i] + v[2][i] * v[2][i]);
    if (sup)
      sum = std::max(sum, mag);
    else
      sum += std::pow(mag, p);
  }
  return sup ? sum : std::pow(sum * grid.cell_volume(), 1.0 / p);
}

}  // namespace cnsdecay
