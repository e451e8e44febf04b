#pragma once

#include <string>
#include <vector>

#include "cnsdecay/decay_fit.hpp"
#include "cnsdecay/params.hpp"
#include "cnsdecay/solver.hpp"
#include "cnsdecay/state.hpp"

namespace cnsdecay {

/// Norms at one time of the nonlinear solution (rho, m), the linear solution
/// (rho_l, m_l) = K(t)(rho_0, m_0) and their difference. Pair norms use
/// ||(a, b)|| = ||a||_{L2} + ||b||_{L2}.
struct DifferenceRow {
  double t = 0.0;
  double diff_rho = 0.0, diff_m = 0.0;
  double lin_rho = 0.0, lin_m = 0.0;
  double full_rho = 0.0, full_m = 0.0;
  double u_l2 = 0.0;
  double rho_l3 = 0.0;
  double u_l6 = 0.0;

  double diff() const noexcept { return diff_rho + diff_m; }
  double linear() const noexcept { return lin_rho + lin_m; }
  double full() const noexcept { return full_rho + full_m; }
};

struct DifferenceSeries {
  std::vector<DifferenceRow> rows;
  bool failed = false;
  std::string failure;
  std::string failure_kind;
  double failure_time = 0.0;
};

/// Advances the momentum-form solver from init and evaluates the grid
/// semigroup on the same data at every recording step of `config` (the form
/// setting is ignored). The difference at the initial time is exactly zero.
DifferenceSeries coupled_run(const PerturbationState& init, const SolverConfig& config, const FluidParams& params);

std::string difference_csv_header();
std::string difference_csv_row(const DifferenceRow& r);
void write_difference_csv(const std::string& path, const DifferenceSeries& series);

struct DifferenceCheck {
  DecayFitResult difference;
  DecayFitResult linear;
  DecayFitResult full;
  double gap = 0.0;  ///< exponent(linear) - exponent(difference)
  bool gap_ok = false;
  bool full_matches_linear = false;
  bool pass = false;
};

/// Fits the three pair norms over the window. Passes when the difference
/// decays at least `min_gap` faster than the linear solution and the full
/// solution's exponent is within `match_tol` of the linear one. Throws
/// InsufficientDataError when the window spans less than one decade
/// (t_end < 10 t_begin) or holds too few samples.
DifferenceCheck difference_decay_check(const DifferenceSeries& series, FitWindow window, double min_gap = 0.3,
                                       double match_tol = 0.1);

struct VelocityLowerBoundCheck {
  DecayFitResult fit;          ///< ||u||_{L2} against -3/4
  bool pointwise_ok = false;   ///< ||u|| >= ||m|| - ||rho||_{L3} ||u||_{L6} at every sample
  std::size_t violations = 0;
  double min_margin = 0.0;     ///< smallest ||u|| - (||m|| - ||rho||_{L3} ||u||_{L6})
  bool pass = false;
};

VelocityLowerBoundCheck velocity_lower_bound_check(const DifferenceSeries& series, FitWindow window,
                                                   double tolerance = 0.1);

}  // namespace cnsdecay
