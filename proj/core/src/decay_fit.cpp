#include "cnsdecay/decay_fit.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>

#include "cnsdecay/errors.hpp"
#include "cnsdecay/format.hpp"

namespace cnsdecay {

const char* to_string(BoundMode mode) noexcept {
  switch (mode) {
    case BoundMode::two_sided: return "two-sided";
    case BoundMode::upper: return "upper";
    case BoundMode::lower: return "lower";
  }
  return "two-sided";
}

DecayFitResult fit_power_law(std::span<const double> t, std::span<const double> values, FitWindow window,
                             double target, double tolerance, BoundMode mode, std::string label) {
  if (t.size() != values.size()) throw DimensionError("time and value series differ in length");
  if (!(window.t_begin < window.t_end)) throw InsufficientDataError("fit window must satisfy t_begin < t_end");

  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= window.t_begin && t[i] <= window.t_end) idx.push_back(i);
  if (idx.size() < kMinFitSamples)
    throw InsufficientDataError("fit window holds " + std::to_string(idx.size()) + " samples, need at least " +
                                std::to_string(kMinFitSamples));

  DecayFitResult r;
  r.label = std::move(label);
  r.window = window;
  r.target = target;
  r.tolerance = tolerance;
  r.mode = mode;
  r.samples = idx.size();

  bool all_zero = true;
  for (std::size_t i : idx) all_zero = all_zero && values[i] == 0.0;
  if (all_zero) {
    r.degenerate_input = true;
    r.pass = false;
    return r;
  }
  for (std::size_t i : idx) {
    if (!(values[i] > 0.0))
      throw NonPositiveValueError("nonpositive value " + format_double(values[i]) + " at sample " +
                                      std::to_string(i) + " (t = " + format_double(t[i]) + ")",
                                  i);
  }

  // Values are normalised by the first sample in the window; a constant factor
  // then cancels exactly and only shifts the intercept.
  const double ref = values[idx.front()];
  const double n = static_cast<double>(idx.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i : idx) {
    sx += std::log1p(t[i]);
    sy += std::log(values[i] / ref);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i : idx) {
    const double dx = std::log1p(t[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(values[i] / ref) - my);
  }
  if (!(sxx > 0.0)) throw InsufficientDataError("fit window has no spread in time");
  r.exponent = sxy / sxx;
  const double b = my - r.exponent * mx;
  r.intercept = b + std::log(ref);
  double ss = 0.0;
  for (std::size_t i : idx) {
    const double e = std::log(values[i] / ref) - (b + r.exponent * std::log1p(t[i]));
    ss += e * e;
  }
  r.rms_residual = std::sqrt(ss / n);

  switch (mode) {
    case BoundMode::two_sided: r.pass = std::abs(r.exponent - target) <= tolerance; break;
    case BoundMode::upper: r.pass = r.exponent <= target + tolerance; break;
    case BoundMode::lower: r.pass = r.exponent >= target - tolerance; break;
  }
  return r;
}

namespace targets {
double beta(double p) { return 0.75 * (2.0 / p - 1.0); }
double gradient(double p) { return -beta(p) - 0.5; }
double linear_upper(double eta) { return -(0.75 + 0.5 * eta); }
}  // namespace targets

std::string to_json_line(const DecayFitResult& fit) {
  // Numbers are written as raw shortest round-trip literals so that reruns
  // produce identical bytes.
  nlohmann::ordered_json j;
  j["label"] = fit.label;
  j["exponent"] = fit.exponent;
  j["intercept"] = fit.intercept;
  j["t_begin"] = fit.window.t_begin;
  j["t_end"] = fit.window.t_end;
  j["rms_residual"] = fit.rms_residual;
  j["target"] = fit.target;
  j["tolerance"] = fit.tolerance;
  j["mode"] = to_string(fit.mode);
  j["pass"] = fit.pass;
  j["samples"] = fit.samples;
  j["degenerate_input"] = fit.degenerate_input;
  return j.dump();
}

void append_jsonl(const std::filesystem::path& path, const std::vector<DecayFitResult>& fits) {
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for appending");
  for (const auto& f : fits) out << to_json_line(f) << '\n';
}

std::vector<double> log_spaced_times(double a, double b, std::size_t n) {
  if (n < 2 || !(a >= 0.0) || !(b > a)) throw DomainError("log_spaced_times needs n >= 2 and 0 <= a < b");
  std::vector<double> out(n);
  const double la = std::log1p(a), lb = std::log1p(b);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(n - 1);
    out[i] = std::expm1(la + f * (lb - la));
  }
  out.front() = a;
  out.back() = b;
  return out;
}

}  // namespace cnsdecay
