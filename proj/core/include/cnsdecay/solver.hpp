#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cnsdecay/energy.hpp"
#include "cnsdecay/grid.hpp"
#include "cnsdecay/params.hpp"
#include "cnsdecay/semigroup.hpp"
#include "cnsdecay/state.hpp"

namespace cnsdecay {

enum class Integrator { exponential_euler, exponential_rk2 };
enum class Form { velocity, momentum };

const char* to_string(Integrator i) noexcept;
const char* to_string(Form f) noexcept;

struct SolverConfig {
  double dt = 0.1;
  double t_end = 1.0;
  Integrator integrator = Integrator::exponential_rk2;
  bool dealias = true;
  Form form = Form::momentum;
  /// Observers fire every record_every steps (and at step 0 and the last step).
  int record_every = 10;
  /// Additional recordings at this many log-spaced times per decade of 1 + t; 0 disables.
  int record_per_decade = 0;
  /// Extra recording times, rounded to the nearest step.
  std::vector<double> record_times;
  /// Density floor below which the monitor flags the run.
  double rho_min = 0.1;
  /// With false, only the linear part is advanced.
  bool nonlinear = true;

  /// Throws ConfigError naming the offending solver.* key.
  void validate() const;
  long long steps() const;
};

/// Largest advective step cfl * dx / max|u|; infinity for u = 0.
double advective_dt_bound(const PerturbationState& state, double cfl = 0.5);

/// Exponential integrator in the variables (rho_hat, v_hat) where v is the
/// momentum or the velocity depending on the form. The stiff linear part is
/// propagated by the exact per-shell semigroup; the zero mode of rho is never
/// modified.
class Evolution {
 public:
  Evolution(const PerturbationState& init, const FluidParams& params, const SolverConfig& config);

  /// Advances one step of size config.dt. Throws PositivityError if 1 + rho
  /// <= 0 is met while evaluating the nonlinear terms, NumericalError on
  /// non-finite coefficients.
  void step();

  double time() const noexcept { return t_; }
  long long step_count() const noexcept { return steps_; }
  const SpectralGrid& grid() const noexcept { return grid_; }
  const SpectralField& rho_hat() const noexcept { return rho_; }
  /// Momentum or velocity, per config.form.
  const SpectralVector& v_hat() const noexcept { return v_; }
  /// Velocity in spectral space (derived from the momentum in momentum form).
  SpectralVector velocity_hat() const;
  /// Snapshot as (rho, m) (momentum derived from the velocity in velocity form).
  PerturbationState state() const;

 private:
  void rhs(const SpectralField& rho, const SpectralVector& v, SpectralField& nr, SpectralVector& nv) const;

  SpectralGrid grid_;
  FluidParams params_;
  SolverConfig config_;
  PhiTables phi_;
  SpectralField rho_;
  SpectralVector v_;
  double t0_;
  double t_;
  long long steps_ = 0;
};

/// One step on a (rho, m) state. In velocity form the state is converted to
/// (rho, u) and back, so repeated calls are not identical to an Evolution run.
PerturbationState step(const PerturbationState& state, const SolverConfig& config, const FluidParams& params);

/// Receives a snapshot at every recording time.
using Observer = std::function<void(const Evolution&)>;

struct SimulationResult {
  std::vector<EnergyReport> series;
  bool failed = false;
  std::string failure;        ///< message of the error that stopped the run
  std::string failure_kind;   ///< "positivity" or "numerical"
  double failure_time = 0.0;
  /// Last state that was successfully reached (the failing step is not applied).
  std::optional<PerturbationState> last_state;
  double min_density = 1.0;   ///< smallest min(1 + rho) seen at recordings
  bool floor_violated = false;  ///< min_density dropped below config.rho_min
};

/// Advances to t_end recording an EnergyReport at each recording step and
/// calling the observers there. Errors from a step end the run; the partial
/// series is returned with the failure marker set.
SimulationResult simulate(const PerturbationState& init, const SolverConfig& config, const FluidParams& params,
                          const EnergyConfig& energy, const std::vector<Observer>& observers = {});

/// Step indices at which simulate records.
std::vector<long long> recording_steps(const SolverConfig& config);

}  // namespace cnsdecay
