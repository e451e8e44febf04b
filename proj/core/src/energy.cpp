#include "cnsdecay/energy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "cnsdecay/errors.hpp"
#include "cnsdecay/format.hpp"
#include "cnsdecay/nonlinear.hpp"

namespace cnsdecay {

double EnergyConfig::c_star(const FluidParams& fp) const noexcept {
  return std::min(fp.mu, delta0 * fp.p_prime_1());
}
double EnergyConfig::c1(const FluidParams& fp) const noexcept {
  return (1.0 - delta0) * std::min(1.0, fp.p_prime_1());
}
double EnergyConfig::C1(const FluidParams& fp) const noexcept {
  return (1.0 + delta0) * std::max(1.0, fp.p_prime_1());
}
double EnergyConfig::splitting_radius_constant(const FluidParams& fp) const noexcept {
  return R > 0.0 ? R : 6.0 * C1(fp) / (p * c_star(fp));
}

void EnergyConfig::validate(const FluidParams& fp) const {
  if (!(delta0 > 0.0)) throw ConfigError("energy.delta0", "must be positive");
  if (!(delta0 <= 0.5 * std::min(1.0, fp.p_prime_1())))
    throw ConfigError("energy.delta0", "must not exceed min(1, P'(1)) / 2");
  if (!(R >= 0.0)) throw ConfigError("energy.R", "must be >= 0 (0 selects the default)");
  if (!(p >= 1.0 && p < 2.0)) throw ConfigError("energy.p", "must lie in [1, 2)");
}

namespace {

double cross_term(const SpectralGrid& grid, const SpectralField& rho_hat, const SpectralVector& u_hat) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rho_hat.size(); ++i) {
    const auto k = grid.wavevector(i);
    const Complex kd = k[0] * u_hat[0][i] + k[1] * u_hat[1][i] + k[2] * u_hat[2][i];
    // Re[-i a conj(b)] = Im(a conj(b))
    const Complex prod = kd * std::conj(rho_hat[i]);
    sum += grid.plancherel_weight(i) * grid.wavenumber_sq(i) * prod.imag();
  }
  return sum;
}

}  // namespace

E1Parts energy_e1(const SpectralGrid& grid, const SpectralField& rho_hat, const SpectralVector& u_hat,
                  const FluidParams& params, const EnergyConfig& config) {
  E1Parts e;
  e.grad_u_h1_sq = derivative_norm_sq(u_hat, grid, 1) + derivative_norm_sq(u_hat, grid, 2);
  e.grad_rho_h1_sq = derivative_norm_sq(rho_hat, grid, 1) + derivative_norm_sq(rho_hat, grid, 2);
  e.cross = cross_term(grid, rho_hat, u_hat);
  e.value = e.grad_u_h1_sq + params.p_prime_1() * e.grad_rho_h1_sq + 2.0 * config.delta0 * e.cross;
  return e;
}

E1Parts energy_e1(const PerturbationState& state, const FluidParams& params, const EnergyConfig& config) {
  return energy_e1(state.grid(), state.rho_hat(), state.velocity_hat(), params, config);
}

Dissipation dissipation_terms(const SpectralGrid& grid, const SpectralField& rho_hat, const SpectralVector& u_hat) {
  return {derivative_norm_sq(u_hat, grid, 2) + derivative_norm_sq(u_hat, grid, 3),
          derivative_norm_sq(rho_hat, grid, 2)};
}

Dissipation dissipation_terms(const PerturbationState& state) {
  return dissipation_terms(state.grid(), state.rho_hat(), state.velocity_hat());
}

double SplitNorm::total() const noexcept { return std::sqrt(low * low + high * high); }

bool SplitReport::inequalities_hold(double rel_tol) const noexcept {
  for (int i = 0; i < 3; ++i)
    if (margin[i] < -rel_tol * scale[i]) return false;
  return true;
}

SplitReport fourier_split_norms(const SpectralGrid& grid, const SpectralField& rho_hat, const SpectralVector& u_hat,
                                double t, double R) {
  if (t < 0.0) throw DomainError("time must be nonnegative");
  if (!(R > 0.0)) throw DomainError("splitting constant R must be positive");
  grid.check(rho_hat);
  SplitReport s;
  s.a = R / (1.0 + t);
  s.radius = std::sqrt(s.a);
  std::array<double, 4> ul{}, uh{};
  std::array<double, 3> rl{}, rh{};
  for (std::size_t i = 0; i < rho_hat.size(); ++i) {
    const double k2 = grid.wavenumber_sq(i);
    const double w = grid.plancherel_weight(i);
    const bool low = k2 <= s.a;
    double fu = w * (std::norm(u_hat[0][i]) + std::norm(u_hat[1][i]) + std::norm(u_hat[2][i]));
    double fr = w * std::norm(rho_hat[i]);
    for (int d = 0; d < 4; ++d) {
      (low ? ul : uh)[d] += fu;
      if (d < 3) (low ? rl : rh)[d] += fr;
      fu *= k2;
      fr *= k2;
    }
  }
  for (int d = 0; d < 4; ++d) s.u[d] = {std::sqrt(ul[d]), std::sqrt(uh[d])};
  for (int d = 0; d < 3; ++d) s.rho[d] = {std::sqrt(rl[d]), std::sqrt(rh[d])};
  const double a = s.a, a2 = a * a;
  auto tot = [](double l, double h) { return l + h; };
  s.margin[0] = tot(ul[2], uh[2]) - a * tot(ul[1], uh[1]) + a2 * ul[0];
  s.scale[0] = tot(ul[2], uh[2]) + a * tot(ul[1], uh[1]) + a2 * ul[0];
  s.margin[1] = tot(ul[3], uh[3]) - a * tot(ul[2], uh[2]) + a2 * ul[1];
  s.scale[1] = tot(ul[3], uh[3]) + a * tot(ul[2], uh[2]) + a2 * ul[1];
  s.margin[2] = tot(rl[2], rh[2]) - a * tot(rl[1], rh[1]) + a2 * rl[0];
  s.scale[2] = tot(rl[2], rh[2]) + a * tot(rl[1], rh[1]) + a2 * rl[0];
  return s;
}

SplitReport fourier_split_norms(const PerturbationState& state, double t, const FluidParams& params,
                                const EnergyConfig& config) {
  return fourier_split_norms(state.grid(), state.rho_hat(), state.velocity_hat(), t,
                             config.splitting_radius_constant(params));
}

std::array<double, 2> time_derivative_norms(const SpectralGrid& grid, const SpectralField& rho_hat,
                                            const SpectralVector& u_hat, const FluidParams& params, bool dealias,
                                            bool nonlinear) {
  const std::size_t ns = grid.spectral_size();
  SpectralField s1(ns);
  SpectralVector s2{SpectralField(ns), SpectralField(ns), SpectralField(ns)};
  if (nonlinear) velocity_form_terms(grid, rho_hat, u_hat, params, dealias, s1, s2);
  const double mu = params.mu, ml = params.mu + params.lambda, pp = params.p_prime_1();
  double sr = 0.0, su = 0.0;
  for (std::size_t i = 0; i < ns; ++i) {
    const auto k = grid.wavevector(i);
    const double k2 = grid.wavenumber_sq(i);
    const double w = grid.plancherel_weight(i);
    const Complex kd = k[0] * u_hat[0][i] + k[1] * u_hat[1][i] + k[2] * u_hat[2][i];
    const Complex drho = Complex(kd.imag(), -kd.real()) + s1[i];  // -i k.u + S1
    sr += w * std::norm(drho);
    const Complex irho = Complex(-rho_hat[i].imag(), rho_hat[i].real());
    for (int a = 0; a < 3; ++a) {
      const Complex du = -mu * k2 * u_hat[a][i] - ml * k[a] * kd - pp * k[a] * irho + s2[a][i];
      su += w * std::norm(du);
    }
  }
  return {std::sqrt(sr), std::sqrt(su)};
}

std::array<double, 2> time_derivative_norms(const PerturbationState& state, const FluidParams& params) {
  return time_derivative_norms(state.grid(), state.rho_hat(), state.velocity_hat(), params);
}

EnergyReport energy_report(const SpectralGrid& grid, double t, const SpectralField& rho_hat,
                           const SpectralVector& u_hat, const FluidParams& params, const EnergyConfig& config,
                           double rho_min, bool dealias, bool nonlinear) {
  EnergyReport r;
  r.t = t;
  r.min_density = density_floor(grid.inverse(rho_hat));
  const E1Parts e = energy_e1(grid, rho_hat, u_hat, params, config);
  const Dissipation d = dissipation_terms(grid, rho_hat, u_hat);
  const SplitReport s = fourier_split_norms(grid, rho_hat, u_hat, t, config.splitting_radius_constant(params));
  r.rho_l2 = s.rho[0].total();
  r.u_l2 = s.u[0].total();
  r.grad_rho_h1 = std::sqrt(e.grad_rho_h1_sq);
  r.grad_u_h1 = std::sqrt(e.grad_u_h1_sq);
  r.grad2_u_h1 = std::sqrt(d.grad2_u_h1_sq);
  r.grad2_rho_l2 = std::sqrt(d.grad2_rho_l2_sq);
  r.e1_sq = e.value;
  r.cross = e.cross;
  r.split_u = s.u[0];
  r.split_grad_u = s.u[1];
  r.split_grad2_u = s.u[2];
  r.split_rho = s.rho[0];
  r.split_grad_rho = s.rho[1];
  r.split_grad2_rho = s.rho[2];
  if (r.min_density > 0.0) {
    const auto dt = time_derivative_norms(grid, rho_hat, u_hat, params, dealias, nonlinear);
    r.dt_rho_l2 = dt[0];
    r.dt_u_l2 = dt[1];
  } else {
    r.dt_rho_l2 = r.dt_u_l2 = std::numeric_limits<double>::quiet_NaN();
  }
  r.split_inequalities_ok = s.inequalities_hold();
  const double base = e.grad_u_h1_sq + e.grad_rho_h1_sq;
  const double slack = 1e-12 * std::abs(e.value);
  r.e1_equivalence_ok = config.c1(params) * base <= e.value + slack && e.value <= config.C1(params) * base + slack;
  r.density_floor_ok = r.min_density >= rho_min;
  return r;
}

EnergyReport energy_report(const PerturbationState& state, const FluidParams& params, const EnergyConfig& config,
                           double rho_min) {
  return energy_report(state.grid(), state.time(), state.rho_hat(), state.velocity_hat(), params, config, rho_min);
}

std::string energy_csv_header() {
  return "t,rho_l2,u_l2,grad_rho_h1,grad_u_h1,grad2_u_h1,grad2_rho_l2,e1_sq,cross,"
         "u_low,u_high,grad_u_low,grad_u_high,grad2_u_low,grad2_u_high,"
         "rho_low,rho_high,grad_rho_low,grad_rho_high,grad2_rho_low,grad2_rho_high,"
         "dt_rho_l2,dt_u_l2,min_density,split_ok,e1_equiv_ok,floor_ok";
}

std::string energy_csv_row(const EnergyReport& r) {
  std::string s;
  auto num = [&s](double v) {
    s += format_double(v);
    s += ',';
  };
  num(r.t);
  num(r.rho_l2);
  num(r.u_l2);
  num(r.grad_rho_h1);
  num(r.grad_u_h1);
  num(r.grad2_u_h1);
  num(r.grad2_rho_l2);
  num(r.e1_sq);
  num(r.cross);
  for (const SplitNorm* n : {&r.split_u, &r.split_grad_u, &r.split_grad2_u, &r.split_rho, &r.split_grad_rho,
                             &r.split_grad2_rho}) {
    num(n->low);
    num(n->high);
  }
  num(r.dt_rho_l2);
  num(r.dt_u_l2);
  num(r.min_density);
  s += r.split_inequalities_ok ? "1," : "0,";
  s += r.e1_equivalence_ok ? "1," : "0,";
  s += r.density_floor_ok ? "1" : "0";
  return s;
}

void write_energy_csv(const std::string& path, const std::vector<EnergyReport>& series) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << energy_csv_header() << '\n';
  for (const auto& r : series) out << energy_csv_row(r) << '\n';
}

EnergyInequalityReport check_energy_inequality(const std::vector<EnergyReport>& series, const FluidParams& params,
                                               const EnergyConfig& config, double rel_tol) {
  const std::size_t n = series.size();
  if (n < 3) throw InsufficientDataError("energy inequality check needs at least 3 samples");
  for (std::size_t i = 1; i < n; ++i)
    if (!(series[i].t > series[i - 1].t)) throw DomainError("series times must be strictly increasing");

  EnergyInequalityReport rep;
  rep.derivative.resize(n);
  rep.residual.resize(n);
  auto E = [&](std::size_t i) { return series[i].e1_sq; };
  auto T = [&](std::size_t i) { return series[i].t; };
  for (std::size_t i = 0; i < n; ++i) {
    double d;
    if (i == 0) {
      const double h1 = T(1) - T(0), h2 = T(2) - T(1);
      d = -(2 * h1 + h2) / (h1 * (h1 + h2)) * E(0) + (h1 + h2) / (h1 * h2) * E(1) - h1 / (h2 * (h1 + h2)) * E(2);
    } else if (i == n - 1) {
      const double h1 = T(n - 2) - T(n - 3), h2 = T(n - 1) - T(n - 2);
      d = h2 / (h1 * (h1 + h2)) * E(n - 3) - (h1 + h2) / (h1 * h2) * E(n - 2) +
          (2 * h2 + h1) / (h2 * (h1 + h2)) * E(n - 1);
    } else {
      const double h1 = T(i) - T(i - 1), h2 = T(i + 1) - T(i);
      d = -h2 / (h1 * (h1 + h2)) * E(i - 1) + (h2 - h1) / (h1 * h2) * E(i) + h1 / (h2 * (h1 + h2)) * E(i + 1);
    }
    rep.derivative[i] = d;
  }
  const double cs = config.c_star(params);
  std::optional<std::size_t> last_bad;
  for (std::size_t i = 0; i < n; ++i) {
    const double diss = series[i].grad2_u_h1 * series[i].grad2_u_h1 + series[i].grad2_rho_l2 * series[i].grad2_rho_l2;
    rep.residual[i] = rep.derivative[i] + cs * diss;
    double spacing = std::numeric_limits<double>::infinity();
    if (i > 0) spacing = std::min(spacing, T(i) - T(i - 1));
    if (i + 1 < n) spacing = std::min(spacing, T(i + 1) - T(i));
    const double tol = rel_tol * std::abs(E(i)) * std::max(1.0, 1.0 / spacing);
    if (!(rep.residual[i] <= tol)) {
      ++rep.violations;
      rep.max_violation = std::max(rep.max_violation, rep.residual[i] - tol);
      last_bad = i;
    }
  }
  if (!last_bad)
    rep.first_time_satisfied = T(0);
  else if (*last_bad + 1 < n)
    rep.first_time_satisfied = T(*last_bad + 1);
  return rep;
}

WeightedDissipation weighted_dissipation_integral(const std::vector<EnergyReport>& series, double plateau_tol) {
  const std::size_t n = series.size();
  if (n < 2) throw InsufficientDataError("weighted dissipation needs at least 2 samples");
  WeightedDissipation w;
  w.running.resize(n);
  auto f = [&](std::size_t i) {
    const auto& r = series[i];
    const double s = 1.0 + r.t;
    return s * s * (r.grad2_u_h1 * r.grad2_u_h1 + r.grad2_rho_l2 * r.grad2_rho_l2);
  };
  w.running[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i)
    w.running[i] = w.running[i - 1] + 0.5 * (series[i].t - series[i - 1].t) * (f(i) + f(i - 1));
  w.final_value = w.running.back();

  const double t_star = (1.0 + series.back().t) / 10.0 - 1.0;
  if (t_star < series.front().t)
    throw InsufficientDataError("plateau test needs the series to span one decade in 1 + t");
  std::size_t j = 0;
  while (j + 1 < n && series[j + 1].t < t_star) ++j;
  const double t0 = series[j].t, t1 = series[j + 1].t;
  const double frac = t1 > t0 ? (t_star - t0) / (t1 - t0) : 0.0;
  const double i_star = w.running[j] + frac * (w.running[j + 1] - w.running[j]);
  w.last_decade_growth = w.final_value > 0.0 ? (w.final_value - i_star) / w.final_value : 0.0;
  w.plateau = w.last_decade_growth < plateau_tol;
  return w;
}

}  // namespace cnsdecay
