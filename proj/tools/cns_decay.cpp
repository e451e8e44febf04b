#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "harness.hpp"

namespace h = cnsdecay::harness;

namespace {

int threads_from_env() {
  const char* env = std::getenv("CNS_DECAY_THREADS");
  if (!env || !*env) return 1;
  try {
    const int n = std::stoi(env);
    return n > 0 ? n : 1;
  } catch (const std::exception&) {
    std::cerr << "warning: ignoring CNS_DECAY_THREADS=" << env << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decay experiments for the linearised and nonlinear compressible Navier-Stokes system"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  bool check = false;

  const std::pair<h::RunKind, const char*> kinds[] = {
      {h::RunKind::linear_decay, "Continuum linear decay rates for a radial profile"},
      {h::RunKind::simulate, "Nonlinear run with energy diagnostics"},
      {h::RunKind::difference, "Nonlinear minus linear (Duhamel) difference run"},
      {h::RunKind::fit, "Power-law fit of a column of an existing CSV file"},
      {h::RunKind::report, "Initial data norms, admissible residual and checkpoint"},
  };
  for (const auto& [kind, help] : kinds) {
    CLI::App* sub = app.add_subcommand(h::to_string(kind), help);
    sub->add_option("--config", config_path, "YAML file with flat dotted keys")->required();
    sub->add_option("--out", out_dir, "Output directory (overrides output.dir)");
    sub->add_option("--seed", seed, "Initial-data seed (overrides initial.seed)");
    sub->add_option("--threads", threads, "FFT threads (default: CNS_DECAY_THREADS or 1)")->check(CLI::PositiveNumber);
    sub->add_flag("--check", check, "Exit with status 4 when an acceptance check fails");
  }
  CLI::App* schema = app.add_subcommand("schema", "Print every config key with its default");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : h::kConfigError;
  }

  if (schema->parsed()) {
    for (const auto& [key, value] : h::config_schema()) std::cout << key << ": " << value << "\n";
    return 0;
  }

  h::RunKind kind = h::RunKind::simulate;
  for (const auto& [k, help] : kinds)
    if (app.got_subcommand(h::to_string(k))) kind = k;

  h::RunOptions options;
  options.check = check;
  options.threads = threads ? *threads : threads_from_env();
  const h::RunOutcome out = h::run_file(kind, config_path, {out_dir, seed}, options);

  if (out.exit_code == h::kOk) {
    std::cout << h::to_string(kind) << ": ok";
    if (!out.checks_passed) std::cout << " (some checks failed; see manifest.json)";
    std::cout << "\n";
  } else {
    std::cerr << h::to_string(kind) << ": failed in stage " << out.stage << ": " << out.message << "\n";
  }
  return out.exit_code;
}
