#include "cnsdecay/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cnsdecay/errors.hpp"
#include "cnsdecay/format.hpp"

namespace cnsdecay {

const char* to_string(DataKind k) noexcept {
  switch (k) {
    case DataKind::theorem13: return "theorem13";
    case DataKind::generic_eta: return "generic-eta";
    case DataKind::solenoidal: return "solenoidal";
    case DataKind::custom_profile: return "custom-profile";
  }
  return "theorem13";
}

DataKind parse_data_kind(const std::string& name) {
  for (DataKind k : {DataKind::theorem13, DataKind::generic_eta, DataKind::solenoidal, DataKind::custom_profile})
    if (name == to_string(k)) return k;
  throw ConfigError("initial.kind", "unknown kind '" + name +
                                        "' (expected theorem13, generic-eta, solenoidal or custom-profile)");
}

void InitialDataSpec::validate(const SpectralGrid& grid) const {
  if (!(c0 > 0.0)) throw ConfigError("initial.c0", "must be positive");
  if (!(k_cut > 0.0)) throw ConfigError("initial.k_cut", "must be positive");
  if (!(k_cut < grid.dealias_cutoff()))
    throw ConfigError("initial.k_cut", "must lie below the dealiasing cutoff " + format_double(grid.dealias_cutoff()) +
                                           " of this grid");
  if (!(width >= 0.0)) throw ConfigError("initial.width", "must be >= 0");
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) throw ConfigError("initial.amplitude", "must be >= 0");
  if (!(momentum_ratio >= 0.0)) throw ConfigError("initial.momentum_ratio", "must be >= 0");
  if (!(eta >= 0.0)) throw ConfigError("initial.eta", "must be >= 0");
  if (!(density_floor > 0.0 && density_floor < 1.0)) throw ConfigError("initial.density_floor", "must lie in (0, 1)");
  if (!(profile_power > 0.0)) throw ConfigError("initial.profile_power", "must be positive");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Uniform [0, 1) value attached to (seed, mode, stream); independent of the
/// order in which modes are visited.
double hash_uniform(std::uint64_t seed, const std::array<int, 3>& n, int stream) {
  std::uint64_t h = splitmix64(seed);
  for (int c : n) h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(c) + 0x10000));
  h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

/// Unit complex number with c(-n) = conj(c(n)).
Complex hermitian_phase(std::uint64_t seed, const std::array<int, 3>& n, int stream) {
  const std::array<int, 3> neg{-n[0], -n[1], -n[2]};
  const bool canonical = n >= neg;
  const std::array<int, 3>& rep = canonical ? n : neg;
  const double theta = 2.0 * std::numbers::pi * hash_uniform(seed, rep, stream);
  if (n == neg) return {std::cos(theta), 0.0};
  const Complex c = std::polar(1.0, theta);
  return canonical ? c : std::conj(c);
}

double max_abs(const RealField& f) {
  double m = 0.0;
  for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

double max_magnitude(const RealVector& v) {
  double m = 0.0;
  for (std::size_t i = 0; i < v[0].size(); ++i)
    m = std::max(m, std::sqrt(v[0][i] * v[0][i] + v[1][i] * v[1][i] + v[2][i] * v[2][i]));
  return m;
}

void scale_all(SpectralField& rho, SpectralVector& m, double s) {
  for (auto& c : rho) c *= s;
  for (auto& f : m)
    for (auto& c : f) c *= s;
}

RadialProfileData custom_profile(double amplitude, double width, double eta, double q, double ratio) {
  auto env = [amplitude, width, eta, q](double k) {
    const double x = k / width;
    return amplitude * (eta == 0.0 ? 1.0 : std::pow(x, eta)) * std::exp(-0.5 * std::pow(x, q));
  };
  RadialProfileData d;
  d.rho_hat = [env](double k) { return Complex(env(k), 0.0); };
  if (ratio != 0.0) d.m_long = [env, ratio](double k) { return Complex(0.0, ratio * env(k)); };
  // exp(-x^q / 2) < 1e-30 beyond x = 138^{1/q}
  d.cutoff = width * std::pow(140.0 + 2.0 * eta * std::log(140.0), 1.0 / q);
  d.scale = width;
  d.eta = eta;
  d.low_frequency_floor = eta == 0.0 && ratio == 0.0 && amplitude != 0.0;
  d.description = "custom-profile";
  return d;
}

}  // namespace

GeneratedData generate(const InitialDataSpec& spec, const SpectralGrid& grid) {
  spec.validate(grid);
  const std::size_t ns = grid.spectral_size();
  SpectralField rho(ns, Complex{});
  SpectralVector m{SpectralField(ns, Complex{}), SpectralField(ns, Complex{}), SpectralField(ns, Complex{})};
  const double w = spec.envelope_width();
  const double dxi3 = std::pow(grid.fundamental(), 1.5);

  auto envelope = [&](double k) {
    const double x = k / w;
    const double power = spec.eta == 0.0 ? 1.0 : std::pow(x, spec.eta);
    const double q = spec.kind == DataKind::custom_profile ? spec.profile_power : 2.0;
    return dxi3 * power * std::exp(-0.5 * std::pow(x, q));
  };

  for (std::size_t idx = 1; idx < ns; ++idx) {
    if (!grid.retained_by_dealias(idx)) continue;
    const double k2 = grid.wavenumber_sq(idx);
    if (k2 == 0.0) continue;
    const double k = std::sqrt(k2);
    const double e = envelope(k);
    const auto n = grid.mode(idx);
    const auto kv = grid.wavevector(idx);
    const double xh[3] = {kv[0] / k, kv[1] / k, kv[2] / k};
    switch (spec.kind) {
      case DataKind::theorem13: rho[idx] = e; break;
      case DataKind::custom_profile: {
        rho[idx] = e;
        const Complex par(0.0, spec.momentum_ratio * e);
        for (int a = 0; a < 3; ++a) m[a][idx] = xh[a] * par;
        break;
      }
      case DataKind::generic_eta:
        rho[idx] = e * hermitian_phase(spec.seed, n, 0);
        for (int a = 0; a < 3; ++a) m[a][idx] = spec.momentum_ratio * e * hermitian_phase(spec.seed, n, a + 1);
        break;
      case DataKind::solenoidal: {
        Complex r[3];
        for (int a = 0; a < 3; ++a) r[a] = hermitian_phase(spec.seed, n, a + 1);
        // i (xi/|xi|) x r keeps the conjugate symmetry of r
        const Complex iu(0.0, 1.0);
        m[0][idx] = iu * e * (xh[1] * r[2] - xh[2] * r[1]);
        m[1][idx] = iu * e * (xh[2] * r[0] - xh[0] * r[2]);
        m[2][idx] = iu * e * (xh[0] * r[1] - xh[1] * r[0]);
        break;
      }
    }
  }

  GeneratedData out{PerturbationState(grid), std::nullopt, 0.0};
  const RealField shape_rho = grid.inverse(rho);
  double s = 0.0;
  if (spec.amplitude > 0.0) {
    double ref;
    if (spec.kind == DataKind::solenoidal) {
      ref = max_magnitude({grid.inverse(m[0]), grid.inverse(m[1]), grid.inverse(m[2])});
    } else {
      ref = max_abs(shape_rho);
    }
    if (!(ref > 0.0)) throw InitialDataError("no grid modes fall inside the requested envelope");
    s = spec.amplitude / ref;
    const double lowest = *std::min_element(shape_rho.begin(), shape_rho.end());
    if (lowest < 0.0 && 1.0 + s * lowest < spec.density_floor) {
      const double max_amp = (1.0 - spec.density_floor) * ref / -lowest;
      throw InitialDataError("amplitude " + format_double(spec.amplitude) + " gives min(1 + rho_0) = " +
                                 format_double(1.0 + s * lowest) + " below the floor " +
                                 format_double(spec.density_floor) + "; largest admissible amplitude is " +
                                 format_double(max_amp),
                             max_amp);
    }
  }
  scale_all(rho, m, s);

  if (spec.kind == DataKind::theorem13 && s > 0.0) {
    for (std::size_t idx = 1; idx < ns; ++idx) {
      const double k2 = grid.wavenumber_sq(idx);
      if (k2 == 0.0 || k2 > spec.k_cut * spec.k_cut || grid.is_nyquist(idx)) continue;
      const double cont = std::abs(rho[idx]) / dxi3;
      if (cont < spec.c0)
        throw InitialDataError("|rho_hat_0| = " + format_double(cont) + " < c0 = " + format_double(spec.c0) +
                               " at |xi| = " + format_double(std::sqrt(k2)));
    }
  }
  if (spec.kind == DataKind::theorem13) out.profile = floor_gaussian_profile(s, w);
  if (spec.kind == DataKind::custom_profile)
    out.profile = custom_profile(s, w, spec.eta, spec.profile_power, spec.momentum_ratio);
  out.state = PerturbationState(grid, std::move(rho), std::move(m), 0.0);
  out.scale = s;
  return out;
}

double admissible_residual(const RealField& rho0, const RealVector& u0, const SpectralGrid& grid,
                           const FluidParams& params) {
  grid.check(rho0);
  for (const auto& c : u0) grid.check(c);
  const std::size_t n = grid.real_size();
  const double lo = density_floor(rho0);
  if (!(lo > 0.0)) throw PositivityError("density positivity violated in admissible residual", lo);

  const SpectralField rho_hat = grid.forward(rho0);
  const SpectralVector u_hat{grid.forward(u0[0]), grid.forward(u0[1]), grid.forward(u0[2])};
  std::array<RealField, 9> g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g[3 * i + j] = grid.inverse(derivative(u_hat[i], grid, j));
  RealVector grad_rho{grid.inverse(derivative(rho_hat, grid, 0)), grid.inverse(derivative(rho_hat, grid, 1)),
                      grid.inverse(derivative(rho_hat, grid, 2))};
  RealField p(n);
  for (std::size_t q = 0; q < n; ++q) p[q] = params.pressure(1.0 + rho0[q]);
  const SpectralField p_hat = grid.forward(p);
  RealVector grad_p{grid.inverse(derivative(p_hat, grid, 0)), grid.inverse(derivative(p_hat, grid, 1)),
                    grid.inverse(derivative(p_hat, grid, 2))};
  // V = mu Lap u + (mu + lambda) grad div u = -L u
  RealVector visc;
  {
    const std::size_t ns = grid.spectral_size();
    const double mu = params.mu, ml = params.mu + params.lambda;
    SpectralVector vh{SpectralField(ns), SpectralField(ns), SpectralField(ns)};
    for (std::size_t idx = 0; idx < ns; ++idx) {
      const auto k = grid.wavevector(idx);
      const Complex kd = k[0] * u_hat[0][idx] + k[1] * u_hat[1][idx] + k[2] * u_hat[2][idx];
      for (int a = 0; a < 3; ++a) vh[a][idx] = -mu * grid.wavenumber_sq(idx) * u_hat[a][idx] - ml * k[a] * kd;
    }
    for (int a = 0; a < 3; ++a) visc[a] = grid.inverse(vh[a]);
  }

  const double gamma = params.gamma;
  const double pp = params.p_prime_1();
  RealVector diff{RealField(n), RealField(n), RealField(n)};
  for (std::size_t q = 0; q < n; ++q) {
    const double r = rho0[q], density = 1.0 + r;
    const double coeff = gamma == 1.0 ? -r / density : gamma * std::pow(density, gamma - 2.0) - gamma;
    for (int a = 0; a < 3; ++a) {
      const double adv = u0[0][q] * g[3 * a][q] + u0[1][q] * g[3 * a + 1][q] + u0[2][q] * g[3 * a + 2][q];
      const double direct = -adv + visc[a][q] / density - grad_p[a][q] / density;
      const double s2 = -adv - r / density * visc[a][q] - coeff * grad_rho[a][q];
      const double perturbation = visc[a][q] - pp * grad_rho[a][q] + s2;
      diff[a][q] = direct - perturbation;
    }
  }
  return lp_norm(diff, grid, 2.0);
}

NormReport norm_report(const PerturbationState& state) {
  const SpectralGrid& g = state.grid();
  NormReport r;
  const RealState rs = state.to_real();
  const RealVector u = velocity_from_momentum(rs.rho, rs.m);
  const SpectralVector uh{g.forward(u[0]), g.forward(u[1]), g.forward(u[2])};
  r.rho_l1 = lp_norm(rs.rho, g, 1.0);
  r.u_l1 = lp_norm(u, g, 1.0);
  const double r0 = derivative_norm_sq(state.rho_hat(), g, 0), r1 = derivative_norm_sq(state.rho_hat(), g, 1),
               r2 = derivative_norm_sq(state.rho_hat(), g, 2);
  const double u0 = derivative_norm_sq(uh, g, 0), u1 = derivative_norm_sq(uh, g, 1), u2 = derivative_norm_sq(uh, g, 2);
  r.rho_l2 = std::sqrt(r0);
  r.rho_h1 = std::sqrt(r0 + r1);
  r.rho_h2 = std::sqrt(r0 + r1 + r2);
  r.u_l2 = std::sqrt(u0);
  r.u_h1 = std::sqrt(u0 + u1);
  r.u_h2 = std::sqrt(u0 + u1 + u2);
  return r;
}

}  // namespace cnsdecay
