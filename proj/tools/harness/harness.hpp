#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cnsdecay/decay_fit.hpp"
#include "cnsdecay/energy.hpp"
#include "cnsdecay/initial_data.hpp"
#include "cnsdecay/params.hpp"
#include "cnsdecay/solver.hpp"

namespace cnsdecay::harness {

inline constexpr int kSchemaVersion = 1;

enum class RunKind { linear_decay, simulate, difference, fit, report };

const char* to_string(RunKind k) noexcept;
RunKind parse_run_kind(const std::string& name);

struct GridConfig {
  double L = 6.283185307179586;
  int N = 32;
};

struct FitConfig {
  double t_begin = 100.0;
  double t_end = 10000.0;
  double tolerance = 0.05;
  /// difference: required exponent gap and the full-vs-linear tolerance.
  double min_gap = 0.3;
  double match_tol = 0.1;
  /// fit kind: CSV file and column to fit, target and bound mode.
  std::string input;
  std::string column;
  double target = -0.75;
  BoundMode mode = BoundMode::two_sided;
};

struct LinearConfig {
  int samples = 30;
  int derivative_order = 0;
};

struct RunConfig {
  GridConfig grid;
  FluidParams fluid;
  InitialDataSpec initial;
  SolverConfig solver;
  EnergyConfig energy;
  FitConfig fit;
  LinearConfig linear;
  std::vector<double> checkpoint_times;
  std::string output_dir = "out";

  /// Validates every section; throws ConfigError naming the key.
  void validate(RunKind kind) const;
  /// One "key = value" line per key in schema order, output.dir excluded.
  std::string canonical() const;
  /// FNV-1a 64 of canonical().
  std::uint64_t hash() const;
};

/// Parses a YAML mapping with flat dotted keys ("grid.N: 64"). Unknown keys,
/// nested mappings and ill-typed values raise ConfigError naming the key.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Every accepted key with its default, in schema order.
std::vector<std::pair<std::string, std::string>> config_schema();

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalFailure = 3, kCheckFailure = 4 };

struct RunOutcome {
  int exit_code = kOk;
  std::string status = "ok";  ///< "ok" or "failed"
  std::string stage;          ///< failing stage, empty on success
  std::string message;
  bool checks_passed = true;
  std::vector<std::string> artifacts;  ///< file names relative to the output directory
};

struct RunOptions {
  /// Report failed acceptance checks through exit code 4.
  bool check = false;
  int threads = 1;
};

/// Validates, computes and writes the artifacts of one experiment into
/// config.output_dir. manifest.json is written in every case; other artifacts
/// produced before a failure are kept.
RunOutcome run(RunKind kind, const RunConfig& config, const RunOptions& options = {});

struct Overrides {
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
};

/// Loads the config file, applies the overrides and runs. A config that does
/// not parse still produces a manifest (in the override directory, or the
/// default one) with exit code 2.
RunOutcome run_file(RunKind kind, const std::string& config_path, const Overrides& overrides,
                    const RunOptions& options = {});

}  // namespace cnsdecay::harness
