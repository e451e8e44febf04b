#include "cnsdecay/duhamel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "cnsdecay/errors.hpp"
#include "cnsdecay/format.hpp"
#include "cnsdecay/semigroup.hpp"

namespace cnsdecay {

namespace {

double l2(const SpectralField& f, const SpectralGrid& g) { return std::sqrt(derivative_norm_sq(f, g, 0)); }
double l2(const SpectralVector& f, const SpectralGrid& g) { return std::sqrt(derivative_norm_sq(f, g, 0)); }

SpectralField minus(const SpectralField& a, const SpectralField& b) {
  SpectralField out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

DifferenceRow make_row(const SpectralGrid& g, double t, const SpectralField& rho, const SpectralVector& m,
                       const PerturbationState& lin) {
  DifferenceRow r;
  r.t = t;
  r.full_rho = l2(rho, g);
  r.full_m = l2(m, g);
  r.lin_rho = l2(lin.rho_hat(), g);
  r.lin_m = l2(lin.m_hat(), g);
  r.diff_rho = l2(minus(rho, lin.rho_hat()), g);
  const SpectralVector dm{minus(m[0], lin.m_hat()[0]), minus(m[1], lin.m_hat()[1]), minus(m[2], lin.m_hat()[2])};
  r.diff_m = l2(dm, g);
  const RealField rho_r = g.inverse(rho);
  const RealVector m_r{g.inverse(m[0]), g.inverse(m[1]), g.inverse(m[2])};
  const RealVector u = velocity_from_momentum(rho_r, m_r);
  r.u_l2 = lp_norm(u, g, 2.0);
  r.rho_l3 = lp_norm(rho_r, g, 3.0);
  r.u_l6 = lp_norm(u, g, 6.0);
  return r;
}

}  // namespace

DifferenceSeries coupled_run(const PerturbationState& init, const SolverConfig& config, const FluidParams& params) {
  SolverConfig cfg = config;
  cfg.form = Form::momentum;
  cfg.validate();
  params.validate();
  DifferenceSeries out;
  Evolution evo(init, params, cfg);
  const auto rec = recording_steps(cfg);
  std::size_t next = 0;
  const long long n = cfg.steps();
  try {
    while (true) {
      if (next < rec.size() && rec[next] == evo.step_count()) {
        const PerturbationState lin = apply_semigroup_grid(init, params, evo.time() - init.time());
        out.rows.push_back(make_row(evo.grid(), evo.time(), evo.rho_hat(), evo.v_hat(), lin));
        ++next;
      }
      if (evo.step_count() >= n) break;
      evo.step();
    }
  } catch (const PositivityError& e) {
    out.failed = true;
    out.failure = e.what();
    out.failure_kind = "positivity";
    out.failure_time = evo.time();
  } catch (const NumericalError& e) {
    out.failed = true;
    out.failure = e.what();
    out.failure_kind = "numerical";
    out.failure_time = evo.time();
  }
  return out;
}

std::string difference_csv_header() {
  return "t,diff_pair,lin_pair,full_pair,diff_rho,diff_m,lin_rho,lin_m,full_rho,full_m,u_l2,rho_l3,u_l6";
}

std::string difference_csv_row(const DifferenceRow& r) {
  std::string s;
  const double v[] = {r.t,        r.diff(),  r.linear(), r.full(), r.diff_rho, r.diff_m, r.lin_rho,
                      r.lin_m,    r.full_rho, r.full_m,  r.u_l2,   r.rho_l3,   r.u_l6};
  for (std::size_t i = 0; i < std::size(v); ++i) {
    if (i) s += ',';
    s += format_double(v[i]);
  }
  return s;
}

void write_difference_csv(const std::string& path, const DifferenceSeries& series) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << difference_csv_header() << '\n';
  for (const auto& r : series.rows) out << difference_csv_row(r) << '\n';
}

DifferenceCheck difference_decay_check(const DifferenceSeries& series, FitWindow window, double min_gap,
                                       double match_tol) {
  if (!(window.t_begin > 0.0) || window.t_end < 10.0 * window.t_begin)
    throw InsufficientDataError("difference check needs a window of at least one decade (t_end >= 10 t_begin > 0)");
  std::vector<double> t, d, l, f;
  for (const auto& r : series.rows) {
    t.push_back(r.t);
    d.push_back(r.diff());
    l.push_back(r.linear());
    f.push_back(r.full());
  }
  DifferenceCheck c;
  c.linear = fit_power_law(t, l, window, targets::linear_lower, match_tol, BoundMode::two_sided, "linear_pair");
  c.difference = fit_power_law(t, d, window, c.linear.exponent - min_gap, 0.0, BoundMode::upper, "difference_pair");
  c.full = fit_power_law(t, f, window, c.linear.exponent, match_tol, BoundMode::two_sided, "full_pair");
  c.gap = c.linear.exponent - c.difference.exponent;
  c.gap_ok = c.difference.pass;
  c.full_matches_linear = c.full.pass;
  c.pass = c.gap_ok && c.full_matches_linear;
  return c;
}

VelocityLowerBoundCheck velocity_lower_bound_check(const DifferenceSeries& series, FitWindow window,
                                                   double tolerance) {
  VelocityLowerBoundCheck c;
  std::vector<double> t, u;
  c.min_margin = std::numeric_limits<double>::infinity();
  for (const auto& r : series.rows) {
    const double margin = r.u_l2 - (r.full_m - r.rho_l3 * r.u_l6);
    const double scale = r.u_l2 + r.full_m + r.rho_l3 * r.u_l6;
    if (margin < -1e-12 * scale) ++c.violations;
    c.min_margin = std::min(c.min_margin, margin);
    t.push_back(r.t);
    u.push_back(r.u_l2);
  }
  c.pointwise_ok = c.violations == 0;
  c.fit = fit_power_law(t, u, window, targets::linear_lower, tolerance, BoundMode::two_sided, "u_l2");
  c.pass = c.pointwise_ok && c.fit.pass;
  return c;
}

}  // namespace cnsdecay
