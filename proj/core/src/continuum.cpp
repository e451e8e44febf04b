#include "cnsdecay/continuum.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "cnsdecay/errors.hpp"
#include "cnsdecay/format.hpp"
#include "cnsdecay/symbol.hpp"

namespace cnsdecay {

RadialProfileData floor_gaussian_profile(double amplitude, double width) {
  if (!(width > 0.0)) throw DomainError("profile width must be positive");
  RadialProfileData d;
  d.rho_hat = [amplitude, width](double k) {
    return std::complex<double>(amplitude * std::exp(-0.5 * k * k / (width * width)), 0.0);
  };
  d.cutoff = 12.0 * width;
  d.scale = width;
  d.eta = 0.0;
  d.low_frequency_floor = amplitude != 0.0;
  d.description = "floor-gaussian";
  return d;
}

RadialProfileData vanishing_gaussian_profile(double amplitude, double width, double eta, double long_ratio,
                                             double sol_ratio) {
  if (!(width > 0.0)) throw DomainError("profile width must be positive");
  if (!(eta >= 0.0)) throw DomainError("eta must be nonnegative");
  auto env = [amplitude, width, eta](double k) {
    const double x = k / width;
    return amplitude * (eta == 0.0 ? 1.0 : std::pow(x, eta)) * std::exp(-0.5 * x * x);
  };
  RadialProfileData d;
  d.rho_hat = [env](double k) { return std::complex<double>(env(k), 0.0); };
  d.m_long = [env, long_ratio](double k) { return std::complex<double>(0.0, long_ratio * env(k)); };
  d.m_sol = [env, sol_ratio](double k) { return sol_ratio * std::abs(env(k)); };
  d.cutoff = (12.0 + std::sqrt(2.0 * eta)) * width;
  d.scale = width;
  d.eta = eta;
  d.description = "vanishing-gaussian";
  return d;
}

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 61>;

struct Integrand {
  const RadialProfileData* data;
  const FluidParams* params;
  double t;
  int d;
  bool momentum;

  double operator()(double k) const {
    if (k <= 0.0) return 0.0;
    const std::complex<double> r0 = data->rho_hat ? data->rho_hat(k) : 0.0;
    const std::complex<double> p0 = data->m_long ? data->m_long(k) : 0.0;
    const Block2 a = acoustic_exp(k, *params, t);
    const std::complex<double> i_unit{0.0, 1.0};
    double w = 4.0 * std::numbers::pi * k * k;
    for (int j = 0; j < d; ++j) w *= k * k;
    if (!momentum) return w * std::norm(a.f11 * r0 - i_unit * a.f12 * p0);
    const double s0 = data->m_sol ? data->m_sol(k) : 0.0;
    const double s = std::exp(-params->mu * k * k * t) * s0;
    return w * (std::norm(i_unit * a.f21 * r0 + a.f22 * p0) + s * s);
  }
};

struct PanelResult {
  double value = 0.0;
  double error = 0.0;
};

PanelResult adapt(const Integrand& f, double a, double b, double tol, int depth) {
  double err = 0.0;
  const double v = GK::integrate(f, a, b, 0, 0.0, &err);
  if (err <= tol || depth >= 40) return {v, err};
  const double mid = 0.5 * (a + b);
  const PanelResult l = adapt(f, a, mid, 0.5 * tol, depth + 1);
  const PanelResult r = adapt(f, mid, b, 0.5 * tol, depth + 1);
  return {l.value + r.value, l.error + r.error};
}

std::vector<double> panel_edges(const RadialProfileData& data, const FluidParams& params, double t) {
  const double upper = data.cutoff;
  double h = data.scale > 0.0 ? data.scale : upper;
  double k_cap = upper;
  if (t > 0.0) {
    // Underdamped modes are damped like e^{-rate k^2 t} and oscillate with
    // period ~ pi / (sqrt(P'(1)) t) in k.
    const double rate = std::min(params.nu(), 2.0 * params.mu);
    const double width = 1.0 / std::sqrt(rate * t);
    const double period = std::numbers::pi / (std::sqrt(params.p_prime_1()) * t);
    h = std::min({h, width, 2.0 * period});
    k_cap = std::min(upper, 10.0 * width);
  }
  h *= 0.25;
  const std::size_t fine = std::min<std::size_t>(200000, static_cast<std::size_t>(std::ceil(k_cap / h)));
  std::vector<double> edges;
  edges.reserve(fine + 34);
  for (std::size_t i = 0; i <= fine; ++i) edges.push_back(k_cap * static_cast<double>(i) / static_cast<double>(fine));
  if (upper > k_cap) {
    const int coarse = 32;
    for (int i = 1; i <= coarse; ++i) edges.push_back(k_cap + (upper - k_cap) * i / coarse);
  }
  return edges;
}

double integrate(const Integrand& f, const std::vector<double>& edges, double rel_tol, double& rel_err) {
  const std::size_t panels = edges.size() - 1;
  std::vector<PanelResult> first(panels);
  double total = 0.0;
  for (std::size_t i = 0; i < panels; ++i) {
    first[i].value = GK::integrate(f, edges[i], edges[i + 1], 0, 0.0, &first[i].error);
    total += first[i].value;
  }
  if (total == 0.0) {
    rel_err = 0.0;
    return 0.0;
  }
  const double per_panel = 0.25 * rel_tol * std::abs(total) / static_cast<double>(panels);
  double value = 0.0, error = 0.0;
  for (std::size_t i = 0; i < panels; ++i) {
    PanelResult r = first[i];
    if (r.error > per_panel) r = adapt(f, edges[i], edges[i + 1], per_panel, 0);
    value += r.value;
    error += r.error;
  }
  rel_err = value != 0.0 ? error / std::abs(value) : 0.0;
  return value;
}

}  // namespace

ContinuumNorms linear_l2_norm_continuum(const RadialProfileData& data, const FluidParams& params, double t,
                                        int derivative_order, double rel_tol) {
  if (t < 0.0) throw DomainError("time must be nonnegative");
  if (derivative_order < 0 || derivative_order > 3) throw DomainError("derivative order must be 0..3");
  ContinuumNorms out;
  if (!(data.cutoff > 0.0) || (!data.rho_hat && !data.m_long && !data.m_sol)) return out;
  const auto edges = panel_edges(data, params, t);
  double err_r = 0.0, err_m = 0.0;
  const double rho_sq = integrate({&data, &params, t, derivative_order, false}, edges, rel_tol, err_r);
  const double m_sq = integrate({&data, &params, t, derivative_order, true}, edges, rel_tol, err_m);
  out.rho = std::sqrt(std::max(rho_sq, 0.0));
  out.m = std::sqrt(std::max(m_sq, 0.0));
  out.relative_error = std::max(err_r, err_m);
  if (out.relative_error > rel_tol)
    throw QuadratureError("radial quadrature reached relative error " + format_double(out.relative_error) +
                              " at t = " + format_double(t),
                          out.relative_error);
  return out;
}

LinearDecayCheck verify_linear_decay(const RadialProfileData& data, const FluidParams& params, double eta,
                                     FitWindow window, std::size_t samples, double tolerance,
                                     int derivative_order) {
  LinearDecayCheck c;
  c.times = log_spaced_times(window.t_begin, window.t_end, samples);
  for (double t : c.times) {
    const ContinuumNorms n = linear_l2_norm_continuum(data, params, t, derivative_order);
    c.rho.push_back(n.rho);
    c.m.push_back(n.m);
  }
  const double half_d = 0.5 * derivative_order;
  const double upper = targets::linear_upper(eta) - half_d;
  const std::string suffix = derivative_order == 0 ? "" : "_d" + std::to_string(derivative_order);
  c.rho_upper = fit_power_law(c.times, c.rho, window, upper, tolerance, BoundMode::upper, "rho_l" + suffix + "_upper");
  c.m_upper = fit_power_law(c.times, c.m, window, upper, tolerance, BoundMode::upper, "m_l" + suffix + "_upper");
  c.degenerate_input = c.rho_upper.degenerate_input && c.m_upper.degenerate_input;
  c.pass = c.rho_upper.pass && c.m_upper.pass;
  if (data.low_frequency_floor) {
    const double lower = targets::linear_lower - half_d;
    c.rho_lower = fit_power_law(c.times, c.rho, window, lower, tolerance, BoundMode::lower, "rho_l" + suffix + "_lower");
    c.m_lower = fit_power_law(c.times, c.m, window, lower, tolerance, BoundMode::lower, "m_l" + suffix + "_lower");
    c.pass = c.pass && c.rho_lower->pass && c.m_lower->pass;
  }
  return c;
}

}  // namespace cnsdecay
