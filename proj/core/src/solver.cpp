#include "cnsdecay/solver.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "cnsdecay/errors.hpp"
#include "cnsdecay/nonlinear.hpp"

namespace cnsdecay {

const char* to_string(Integrator i) noexcept {
  return i == Integrator::exponential_euler ? "exponential-euler" : "exponential-rk2";
}
const char* to_string(Form f) noexcept { return f == Form::velocity ? "velocity" : "momentum"; }

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("solver.dt", "must be positive and finite");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ConfigError("solver.t_end", "must be >= 0 and finite");
  if (t_end / dt > 1e9) throw ConfigError("solver.t_end", "more than 1e9 steps requested");
  if (record_every < 1) throw ConfigError("solver.record_every", "must be >= 1");
  if (record_per_decade < 0) throw ConfigError("solver.record_per_decade", "must be >= 0");
  if (!(rho_min > 0.0 && rho_min < 1.0)) throw ConfigError("solver.rho_min", "must lie in (0, 1)");
}

long long SolverConfig::steps() const { return std::llround(t_end / dt); }

double advective_dt_bound(const PerturbationState& state, double cfl) {
  const RealVector u = state.velocity_real();
  const double umax = lp_norm(u, state.grid(), std::numeric_limits<double>::infinity());
  if (umax == 0.0) return std::numeric_limits<double>::infinity();
  return cfl * state.grid().spacing() / umax;
}

namespace {

void require_finite(const SpectralField& rho, const SpectralVector& v, double t) {
  auto ok = [](const SpectralField& f) {
    for (const Complex& c : f)
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
  };
  if (!ok(rho) || !ok(v[0]) || !ok(v[1]) || !ok(v[2]))
    throw NumericalError("non-finite spectral coefficient after step to t = " + std::to_string(t));
}

}  // namespace

Evolution::Evolution(const PerturbationState& init, const FluidParams& params, const SolverConfig& config)
    : grid_(init.grid()),
      params_(params),
      config_(config),
      phi_(phi_tables(init.grid(), params, config.dt)),
      rho_(init.rho_hat()),
      t0_(init.time()),
      t_(init.time()) {
  config_.validate();
  if (config_.form == Form::momentum) {
    v_ = init.m_hat();
  } else {
    v_ = init.velocity_hat();
  }
}

void Evolution::rhs(const SpectralField& rho, const SpectralVector& v, SpectralField& nr, SpectralVector& nv) const {
  const std::size_t ns = grid_.spectral_size();
  nr.assign(ns, Complex{});
  for (auto& c : nv) c.assign(ns, Complex{});
  if (!config_.nonlinear) return;
  if (config_.form == Form::momentum) {
    momentum_form_terms(grid_, rho, v, params_, config_.dealias, nv);
  } else {
    velocity_form_terms(grid_, rho, v, params_, config_.dealias, nr, nv);
  }
  nr[0] = Complex{};
}

void Evolution::step() {
  const double h = config_.dt;
  SpectralField n0r;
  SpectralVector n0v;
  rhs(rho_, v_, n0r, n0v);

  SpectralField ar;
  SpectralVector av;
  phi_.phi0.apply(rho_, v_, ar, av);
  phi_.phi1.apply_add(n0r, n0v, h, ar, av);

  if (config_.integrator == Integrator::exponential_rk2) {
    SpectralField n1r;
    SpectralVector n1v;
    rhs(ar, av, n1r, n1v);
    for (std::size_t i = 0; i < n1r.size(); ++i) n1r[i] -= n0r[i];
    for (int a = 0; a < 3; ++a)
      for (std::size_t i = 0; i < n1v[a].size(); ++i) n1v[a][i] -= n0v[a][i];
    phi_.phi2.apply_add(n1r, n1v, h, ar, av);
  }
  ar[0] = rho_[0];
  // Times are t0 + n h rather than a running sum, so recorded times do not drift.
  const double t_new = t0_ + static_cast<double>(steps_ + 1) * h;
  require_finite(ar, av, t_new);
  rho_ = std::move(ar);
  v_ = std::move(av);
  ++steps_;
  t_ = t_new;
}

SpectralVector Evolution::velocity_hat() const {
  if (config_.form == Form::velocity) return v_;
  const RealField rho = grid_.inverse(rho_);
  const RealVector m{grid_.inverse(v_[0]), grid_.inverse(v_[1]), grid_.inverse(v_[2])};
  const RealVector u = velocity_from_momentum(rho, m);
  return {grid_.forward(u[0]), grid_.forward(u[1]), grid_.forward(u[2])};
}

PerturbationState Evolution::state() const {
  if (config_.form == Form::momentum) return PerturbationState(grid_, rho_, v_, t_);
  const RealField rho = grid_.inverse(rho_);
  const RealVector u{grid_.inverse(v_[0]), grid_.inverse(v_[1]), grid_.inverse(v_[2])};
  const RealVector m = momentum_from_velocity(rho, u);
  return PerturbationState(grid_, rho_, {grid_.forward(m[0]), grid_.forward(m[1]), grid_.forward(m[2])}, t_);
}

PerturbationState step(const PerturbationState& state, const SolverConfig& config, const FluidParams& params) {
  Evolution e(state, params, config);
  e.step();
  return e.state();
}

std::vector<long long> recording_steps(const SolverConfig& config) {
  const long long n = config.steps();
  std::set<long long> s;
  for (long long k = 0; k <= n; k += config.record_every) s.insert(k);
  s.insert(n);
  if (config.record_per_decade > 0) {
    for (int j = 1;; ++j) {
      const double t = std::pow(10.0, static_cast<double>(j) / config.record_per_decade) - 1.0;
      const long long k = std::llround(t / config.dt);
      if (k > n) break;
      if (k > 0) s.insert(k);
    }
  }
  for (double t : config.record_times) {
    const long long k = std::llround(t / config.dt);
    if (k >= 0 && k <= n) s.insert(k);
  }
  return {s.begin(), s.end()};
}

SimulationResult simulate(const PerturbationState& init, const SolverConfig& config, const FluidParams& params,
                          const EnergyConfig& energy, const std::vector<Observer>& observers) {
  config.validate();
  params.validate();
  energy.validate(params);
  SimulationResult result;
  Evolution evo(init, params, config);
  const std::vector<long long> rec = recording_steps(config);
  std::size_t next = 0;

  auto record = [&]() {
    const SpectralVector u = evo.velocity_hat();
    EnergyReport r = energy_report(evo.grid(), evo.time(), evo.rho_hat(), u, params, energy, config.rho_min,
                                   config.dealias, config.nonlinear);
    result.min_density = std::min(result.min_density, r.min_density);
    if (!r.density_floor_ok) result.floor_violated = true;
    result.series.push_back(r);
    for (const auto& obs : observers) obs(evo);
  };

  try {
    const long long n = config.steps();
    while (true) {
      if (next < rec.size() && rec[next] == evo.step_count()) {
        record();
        ++next;
      }
      if (evo.step_count() >= n) break;
      evo.step();
    }
  } catch (const PositivityError& e) {
    result.failed = true;
    result.failure = e.what();
    result.failure_kind = "positivity";
  } catch (const NumericalError& e) {
    result.failed = true;
    result.failure = e.what();
    result.failure_kind = "numerical";
  }
  result.failure_time = evo.time();
  result.last_state = evo.state();
  return result;
}

}  // namespace cnsdecay
