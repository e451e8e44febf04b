#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace cnsdecay {

struct FitWindow {
  double t_begin = 0.0;
  double t_end = 0.0;
};

/// How the fitted exponent is compared with the target.
enum class BoundMode {
  two_sided,  ///< |exponent - target| <= tolerance
  upper,      ///< exponent <= target + tolerance (decay at least this fast)
  lower,      ///< exponent >= target - tolerance (decay at most this fast)
};

const char* to_string(BoundMode mode) noexcept;

/// Least-squares fit of log v = intercept + exponent * log(1 + t).
struct DecayFitResult {
  std::string label;
  double exponent = 0.0;
  double intercept = 0.0;
  FitWindow window;
  double rms_residual = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  BoundMode mode = BoundMode::two_sided;
  bool pass = false;
  std::size_t samples = 0;
  /// Set when every value in the window is exactly zero; no fit is attempted.
  bool degenerate_input = false;
};

inline constexpr std::size_t kMinFitSamples = 10;

/// Fits the samples with t in [window.t_begin, window.t_end].
/// Throws InsufficientDataError for fewer than kMinFitSamples samples (or an
/// empty window) and NonPositiveValueError for a value <= 0 inside the window.
/// If all values in the window are zero the result is flagged degenerate and
/// does not pass.
DecayFitResult fit_power_law(std::span<const double> t, std::span<const double> values, FitWindow window,
                             double target, double tolerance, BoundMode mode = BoundMode::two_sided,
                             std::string label = {});

/// Theoretical exponents.
namespace targets {
/// beta(p) = 3/4 (2/p - 1): decay of the solution for L^p data.
double beta(double p);
/// Gradient exponent -beta(p) - 1/2.
double gradient(double p);
/// Linear decay for data vanishing to order eta at the origin.
double linear_upper(double eta);
/// Lower bound exponent -3/4 under the low-frequency floor hypothesis.
inline constexpr double linear_lower = -0.75;
/// Decay of the nonlinear-minus-linear difference.
inline constexpr double duhamel_difference = -1.25;
}  // namespace targets

/// One JSON object per line; keys are listed in README.md.
std::string to_json_line(const DecayFitResult& fit);
void append_jsonl(const std::filesystem::path& path, const std::vector<DecayFitResult>& fits);

/// n logarithmically spaced times in [a, b] (in 1 + t) with both endpoints.
std::vector<double> log_spaced_times(double a, double b, std::size_t n);

}  // namespace cnsdecay
