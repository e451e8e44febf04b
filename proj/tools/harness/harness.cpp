#include "harness.hpp"

#include <yaml-cpp/yaml.h>

#include <Eigen/Core>
#include <algorithm>
#include <boost/version.hpp>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "cnsdecay/checkpoint.hpp"
#include "cnsdecay/continuum.hpp"
#include "cnsdecay/duhamel.hpp"
#include "cnsdecay/errors.hpp"
#include "cnsdecay/format.hpp"

#ifndef CNSDECAY_VERSION
#define CNSDECAY_VERSION "unknown"
#endif

namespace cnsdecay::harness {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

const char* to_string(RunKind k) noexcept {
  switch (k) {
    case RunKind::linear_decay: return "linear-decay";
    case RunKind::simulate: return "simulate";
    case RunKind::difference: return "difference";
    case RunKind::fit: return "fit";
    case RunKind::report: return "report";
  }
  return "simulate";
}

RunKind parse_run_kind(const std::string& name) {
  for (RunKind k : {RunKind::linear_decay, RunKind::simulate, RunKind::difference, RunKind::fit, RunKind::report})
    if (name == to_string(k)) return k;
  throw ConfigError("kind", "unknown experiment kind '" + name + "'");
}

namespace {

struct Key {
  std::string name;
  std::function<void(RunConfig&, const YAML::Node&)> set;
  std::function<Json(const RunConfig&)> get;
};

template <class T>
T convert(const YAML::Node& node, const std::string& key, const char* expected) {
  if (!node.IsScalar()) throw ConfigError(key, std::string("expected ") + expected);
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(key, std::string("expected ") + expected + ", got '" + node.Scalar() + "'");
  }
}

template <class T>
const char* type_name() {
  if constexpr (std::is_same_v<T, bool>) return "true or false";
  else if constexpr (std::is_integral_v<T>) return "an integer";
  else if constexpr (std::is_floating_point_v<T>) return "a number";
  else return "a string";
}

template <class T, class Access>
Key field(std::string name, Access access) {
  Key k;
  k.name = name;
  k.set = [name, access](RunConfig& c, const YAML::Node& n) { access(c) = convert<T>(n, name, type_name<T>()); };
  k.get = [access](const RunConfig& c) { return Json(access(const_cast<RunConfig&>(c))); };
  return k;
}

template <class E, class Parse>
Key enum_field(std::string name, E& (*access)(RunConfig&), Parse parse) {
  Key k;
  k.name = name;
  k.set = [name, access, parse](RunConfig& c, const YAML::Node& n) {
    access(c) = parse(convert<std::string>(n, name, "a string"));
  };
  k.get = [access](const RunConfig& c) { return Json(to_string(access(const_cast<RunConfig&>(c)))); };
  return k;
}

Integrator parse_integrator(const std::string& s) {
  if (s == "exponential-euler") return Integrator::exponential_euler;
  if (s == "exponential-rk2") return Integrator::exponential_rk2;
  throw ConfigError("solver.integrator", "expected exponential-euler or exponential-rk2, got '" + s + "'");
}

Form parse_form(const std::string& s) {
  if (s == "velocity") return Form::velocity;
  if (s == "momentum") return Form::momentum;
  throw ConfigError("solver.form", "expected velocity or momentum, got '" + s + "'");
}

BoundMode parse_mode(const std::string& s) {
  for (BoundMode m : {BoundMode::two_sided, BoundMode::upper, BoundMode::lower})
    if (s == to_string(m)) return m;
  throw ConfigError("fit.mode", "expected two-sided, upper or lower, got '" + s + "'");
}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = [] {
    std::vector<Key> t;
    t.push_back(field<double>("grid.L", [](RunConfig& c) -> double& { return c.grid.L; }));
    t.push_back(field<int>("grid.N", [](RunConfig& c) -> int& { return c.grid.N; }));
    t.push_back(field<double>("fluid.mu", [](RunConfig& c) -> double& { return c.fluid.mu; }));
    t.push_back(field<double>("fluid.lambda", [](RunConfig& c) -> double& { return c.fluid.lambda; }));
    t.push_back(field<double>("fluid.gamma", [](RunConfig& c) -> double& { return c.fluid.gamma; }));
    t.push_back(enum_field<DataKind>(
        "initial.kind", +[](RunConfig& c) -> DataKind& { return c.initial.kind; }, parse_data_kind));
    t.push_back(field<double>("initial.c0", [](RunConfig& c) -> double& { return c.initial.c0; }));
    t.push_back(field<double>("initial.k_cut", [](RunConfig& c) -> double& { return c.initial.k_cut; }));
    t.push_back(field<double>("initial.width", [](RunConfig& c) -> double& { return c.initial.width; }));
    t.push_back(field<double>("initial.amplitude", [](RunConfig& c) -> double& { return c.initial.amplitude; }));
    t.push_back(
        field<double>("initial.momentum_ratio", [](RunConfig& c) -> double& { return c.initial.momentum_ratio; }));
    t.push_back(field<double>("initial.eta", [](RunConfig& c) -> double& { return c.initial.eta; }));
    t.push_back(field<std::uint64_t>("initial.seed", [](RunConfig& c) -> std::uint64_t& { return c.initial.seed; }));
    t.push_back(
        field<double>("initial.density_floor", [](RunConfig& c) -> double& { return c.initial.density_floor; }));
    t.push_back(
        field<double>("initial.profile_power", [](RunConfig& c) -> double& { return c.initial.profile_power; }));
    t.push_back(field<double>("solver.dt", [](RunConfig& c) -> double& { return c.solver.dt; }));
    t.push_back(field<double>("solver.t_end", [](RunConfig& c) -> double& { return c.solver.t_end; }));
    t.push_back(enum_field<Integrator>(
        "solver.integrator", +[](RunConfig& c) -> Integrator& { return c.solver.integrator; }, parse_integrator));
    t.push_back(field<bool>("solver.dealias", [](RunConfig& c) -> bool& { return c.solver.dealias; }));
    t.push_back(enum_field<Form>("solver.form", +[](RunConfig& c) -> Form& { return c.solver.form; }, parse_form));
    t.push_back(field<int>("solver.record_every", [](RunConfig& c) -> int& { return c.solver.record_every; }));
    t.push_back(
        field<int>("solver.record_per_decade", [](RunConfig& c) -> int& { return c.solver.record_per_decade; }));
    t.push_back(field<double>("solver.rho_min", [](RunConfig& c) -> double& { return c.solver.rho_min; }));
    t.push_back(field<bool>("solver.nonlinear", [](RunConfig& c) -> bool& { return c.solver.nonlinear; }));
    t.push_back(field<double>("energy.delta0", [](RunConfig& c) -> double& { return c.energy.delta0; }));
    t.push_back(field<double>("energy.R", [](RunConfig& c) -> double& { return c.energy.R; }));
    t.push_back(field<double>("energy.p", [](RunConfig& c) -> double& { return c.energy.p; }));
    t.push_back(field<double>("fit.t_begin", [](RunConfig& c) -> double& { return c.fit.t_begin; }));
    t.push_back(field<double>("fit.t_end", [](RunConfig& c) -> double& { return c.fit.t_end; }));
    t.push_back(field<double>("fit.tolerance", [](RunConfig& c) -> double& { return c.fit.tolerance; }));
    t.push_back(field<double>("fit.min_gap", [](RunConfig& c) -> double& { return c.fit.min_gap; }));
    t.push_back(field<double>("fit.match_tol", [](RunConfig& c) -> double& { return c.fit.match_tol; }));
    t.push_back(field<std::string>("fit.input", [](RunConfig& c) -> std::string& { return c.fit.input; }));
    t.push_back(field<std::string>("fit.column", [](RunConfig& c) -> std::string& { return c.fit.column; }));
    t.push_back(field<double>("fit.target", [](RunConfig& c) -> double& { return c.fit.target; }));
    t.push_back(enum_field<BoundMode>(
        "fit.mode", +[](RunConfig& c) -> BoundMode& { return c.fit.mode; }, parse_mode));
    t.push_back(field<int>("linear.samples", [](RunConfig& c) -> int& { return c.linear.samples; }));
    t.push_back(
        field<int>("linear.derivative_order", [](RunConfig& c) -> int& { return c.linear.derivative_order; }));
    {
      Key k;
      k.name = "checkpoint.times";
      k.set = [](RunConfig& c, const YAML::Node& n) {
        c.checkpoint_times.clear();
        if (n.IsScalar()) {
          c.checkpoint_times.push_back(convert<double>(n, "checkpoint.times", "a number or a list of numbers"));
          return;
        }
        if (!n.IsSequence()) throw ConfigError("checkpoint.times", "expected a list of numbers");
        for (const auto& e : n) c.checkpoint_times.push_back(convert<double>(e, "checkpoint.times", "a number"));
      };
      k.get = [](const RunConfig& c) { return Json(c.checkpoint_times); };
      t.push_back(k);
    }
    t.push_back(field<std::string>("output.dir", [](RunConfig& c) -> std::string& { return c.output_dir; }));
    return t;
  }();
  return table;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

void RunConfig::validate(RunKind kind) const {
  if (!(grid.L > 0.0) || !std::isfinite(grid.L)) throw ConfigError("grid.L", "must be positive");
  if (grid.N < 8 || grid.N % 2 != 0 || grid.N > 1024) throw ConfigError("grid.N", "must be even and in [8, 1024]");
  fluid.validate();
  solver.validate();
  energy.validate(fluid);
  if (!(fit.t_begin >= 0.0) || !(fit.t_end > fit.t_begin)) throw ConfigError("fit.t_end", "requires t_end > t_begin >= 0");
  if (!(fit.tolerance >= 0.0)) throw ConfigError("fit.tolerance", "must be >= 0");
  if (!(fit.match_tol >= 0.0)) throw ConfigError("fit.match_tol", "must be >= 0");
  if (linear.samples < static_cast<int>(kMinFitSamples))
    throw ConfigError("linear.samples", "must be >= " + std::to_string(kMinFitSamples));
  if (linear.derivative_order < 0 || linear.derivative_order > 3)
    throw ConfigError("linear.derivative_order", "must lie in [0, 3]");
  for (double t : checkpoint_times)
    if (!(t >= 0.0) || t > solver.t_end) throw ConfigError("checkpoint.times", "times must lie in [0, solver.t_end]");
  if (output_dir.empty()) throw ConfigError("output.dir", "must not be empty");
  if (kind == RunKind::fit) {
    if (fit.input.empty()) throw ConfigError("fit.input", "required for the fit experiment");
    if (fit.column.empty()) throw ConfigError("fit.column", "required for the fit experiment");
  }
  if (kind != RunKind::fit) initial.validate(SpectralGrid(grid.L, grid.N));
  if (kind == RunKind::linear_decay && initial.kind != DataKind::theorem13 &&
      initial.kind != DataKind::custom_profile)
    throw ConfigError("initial.kind", "linear-decay needs a radial profile (theorem13 or custom-profile)");
  if (kind == RunKind::difference && fit.t_end < 10.0 * fit.t_begin)
    throw ConfigError("fit.t_end", "the difference check needs a window of at least one decade");
}

std::string RunConfig::canonical() const {
  std::string s;
  for (const auto& k : keys())
    if (k.name != "output.dir") s += k.name + " = " + k.get(*this).dump() + "\n";
  return s;
}

std::uint64_t RunConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<std::pair<std::string, std::string>> config_schema() {
  const RunConfig defaults;
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& k : keys()) out.emplace_back(k.name, k.get(defaults).dump());
  return out;
}

RunConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("config", std::string("not valid YAML: ") + e.what());
  }
  RunConfig c;
  if (root.IsNull()) return c;
  if (!root.IsMap()) throw ConfigError("config", "expected a mapping of dotted keys to values");
  std::map<std::string, const Key*> index;
  for (const auto& k : keys()) index.emplace(k.name, &k);
  for (const auto& entry : root) {
    const std::string name = entry.first.as<std::string>();
    auto it = index.find(name);
    if (it == index.end()) throw ConfigError(name, "unknown key");
    if (entry.second.IsMap()) throw ConfigError(name, "nested mappings are not supported; use dotted keys");
    it->second->set(c, entry.second);
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace {

class RunContext {
 public:
  RunContext(RunKind kind, const RunConfig& config, const RunOptions& options)
      : kind_(kind), config_(config), options_(options), dir_(config.output_dir) {}

  /// Writes only the manifest for a config that could not be loaded.
  RunOutcome reject(const std::string& message) {
    fail(kConfigError, "config", message);
    write_manifest(0.0);
    return outcome_;
  }

  RunOutcome execute() {
    const auto start = std::chrono::steady_clock::now();
    std::string stage = "config";
    try {
      config_.validate(kind_);
      fs::create_directories(dir_);
      fs::remove(dir_ / "fits.jsonl");
      set_fft_threads(options_.threads);
      stage = "compute";
      switch (kind_) {
        case RunKind::linear_decay: linear_decay(stage); break;
        case RunKind::simulate: simulate_run(stage); break;
        case RunKind::difference: difference(stage); break;
        case RunKind::fit: fit(stage); break;
        case RunKind::report: report(stage); break;
      }
      stage.clear();
      if (!outcome_.checks_passed && options_.check) {
        outcome_.exit_code = kCheckFailure;
        outcome_.status = "failed";
        outcome_.stage = "check";
        outcome_.message = "acceptance checks failed";
      }
    } catch (const ConfigError& e) {
      fail(kConfigError, stage, e.what());
    } catch (const InitialDataError& e) {
      fail(kConfigError, stage, e.what());
      manifest_["max_admissible_amplitude"] = e.max_admissible_amplitude();
    } catch (const InsufficientDataError& e) {
      fail(kConfigError, stage, e.what());
    } catch (const FormatError& e) {
      fail(kConfigError, stage, e.what());
    } catch (const NonPositiveValueError& e) {
      fail(kConfigError, stage, e.what());
    } catch (const std::exception& e) {
      fail(kNumericalFailure, stage, e.what());
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(wall);
    return outcome_;
  }

 private:
  void fail(int code, const std::string& stage, const std::string& message) {
    outcome_.exit_code = code;
    outcome_.status = "failed";
    outcome_.stage = stage.empty() ? "output" : stage;
    outcome_.message = message;
  }

  fs::path artifact(const std::string& name) {
    outcome_.artifacts.push_back(name);
    return dir_ / name;
  }

  void write_fits(const std::vector<DecayFitResult>& fits) {
    const fs::path p = dir_ / "fits.jsonl";
    if (std::find(outcome_.artifacts.begin(), outcome_.artifacts.end(), "fits.jsonl") == outcome_.artifacts.end())
      outcome_.artifacts.push_back("fits.jsonl");
    append_jsonl(p, fits);
  }

  void check(const std::string& name, bool ok) {
    checks_[name] = ok;
    if (!ok) outcome_.checks_passed = false;
  }

  void note(const std::string& text) { notes_.push_back(text); }

  GeneratedData initial(std::string& stage) {
    stage = "initial-data";
    GeneratedData g = generate(config_.initial, SpectralGrid(config_.grid.L, config_.grid.N));
    stage = "compute";
    return g;
  }

  void linear_decay(std::string& stage) {
    GeneratedData data = initial(stage);
    const FitWindow w{config_.fit.t_begin, config_.fit.t_end};
    const double eta = config_.initial.kind == DataKind::theorem13 ? 0.0 : config_.initial.eta;
    const LinearDecayCheck c = verify_linear_decay(*data.profile, config_.fluid, eta, w,
                                                   static_cast<std::size_t>(config_.linear.samples),
                                                   config_.fit.tolerance, config_.linear.derivative_order);
    stage = "output";
    std::ofstream out(artifact("linear.csv"), std::ios::binary | std::ios::trunc);
    out << "t,rho_l2,m_l2\n";
    for (std::size_t i = 0; i < c.times.size(); ++i)
      out << format_double(c.times[i]) << ',' << format_double(c.rho[i]) << ',' << format_double(c.m[i]) << '\n';
    out.close();
    std::vector<DecayFitResult> fits{c.rho_upper, c.m_upper};
    if (c.rho_lower) fits.push_back(*c.rho_lower);
    if (c.m_lower) fits.push_back(*c.m_lower);
    write_fits(fits);
    for (const auto& f : fits) check(f.label, f.pass);
  }

  void write_checkpoint_at(const Evolution& evo) {
    const std::string name = "checkpoint_" + std::to_string(evo.step_count()) + ".ckpt";
    write_checkpoint((dir_ / name).string(), evo.state(), config_.fluid);
    outcome_.artifacts.push_back(name);
    checkpoint_index_.push_back({{"file", name}, {"t", evo.time()}, {"step", evo.step_count()}});
  }

  void simulate_run(std::string& stage) {
    GeneratedData data = initial(stage);
    SolverConfig sc = config_.solver;
    sc.record_times = config_.checkpoint_times;
    std::vector<long long> ck;
    for (double t : config_.checkpoint_times) ck.push_back(std::llround(t / sc.dt));
    std::vector<Observer> obs;
    if (!ck.empty())
      obs.push_back([&](const Evolution& evo) {
        if (std::find(ck.begin(), ck.end(), evo.step_count()) != ck.end()) write_checkpoint_at(evo);
      });
    const SimulationResult res = simulate(data.state, sc, config_.fluid, config_.energy, obs);
    stage = "output";
    write_energy_csv(artifact("energy.csv").string(), res.series);
    manifest_["min_density"] = res.min_density;
    check("density_floor", !res.floor_violated);
    if (res.failed) {
      manifest_["failure_time"] = res.failure_time;
      if (res.last_state) write_checkpoint((dir_ / "last_state.ckpt").string(), *res.last_state, config_.fluid);
      outcome_.artifacts.push_back("last_state.ckpt");
      throw NumericalError(res.failure_kind + ": " + res.failure);
    }
    stage = "check";
    bool split = true, equiv = true;
    for (const auto& r : res.series) {
      split = split && r.split_inequalities_ok;
      equiv = equiv && r.e1_equivalence_ok;
    }
    check("split_inequalities", split);
    check("e1_equivalence", equiv);
    if (res.series.size() >= 3) {
      const EnergyInequalityReport ei = check_energy_inequality(res.series, config_.fluid, config_.energy);
      check("energy_inequality_onset", ei.first_time_satisfied.has_value());
      manifest_["energy_inequality"] = {
          {"first_time_satisfied", ei.first_time_satisfied ? Json(*ei.first_time_satisfied) : Json(nullptr)},
          {"violations", ei.violations},
          {"max_violation", ei.max_violation}};
    } else {
      note("energy inequality skipped: fewer than 3 recordings");
    }
    try {
      const WeightedDissipation wd = weighted_dissipation_integral(res.series);
      check("dissipation_plateau", wd.plateau);
      manifest_["weighted_dissipation"] = {{"final_value", wd.final_value},
                                           {"last_decade_growth", wd.last_decade_growth},
                                           {"plateau", wd.plateau}};
    } catch (const InsufficientDataError& e) {
      note(std::string("plateau test skipped: ") + e.what());
    }

    std::vector<double> t, rho, u, grho, gu;
    for (const auto& r : res.series) {
      t.push_back(r.t);
      rho.push_back(r.rho_l2);
      u.push_back(r.u_l2);
      grho.push_back(r.grad_rho_h1);
      gu.push_back(r.grad_u_h1);
    }
    const FitWindow w{config_.fit.t_begin, config_.fit.t_end};
    const double p = config_.energy.p, tol = config_.fit.tolerance;
    try {
      write_fits({fit_power_law(t, rho, w, -targets::beta(p), tol, BoundMode::upper, "rho_l2"),
                  fit_power_law(t, u, w, -targets::beta(p), tol, BoundMode::upper, "u_l2"),
                  fit_power_law(t, grho, w, targets::gradient(p), tol, BoundMode::upper, "grad_rho_h1"),
                  fit_power_law(t, gu, w, targets::gradient(p), tol, BoundMode::upper, "grad_u_h1")});
    } catch (const InsufficientDataError& e) {
      note(std::string("decay fits skipped: ") + e.what());
    } catch (const NonPositiveValueError& e) {
      note(std::string("decay fits skipped: ") + e.what());
    }
  }

  void difference(std::string& stage) {
    GeneratedData data = initial(stage);
    const DifferenceSeries s = coupled_run(data.state, config_.solver, config_.fluid);
    stage = "output";
    write_difference_csv(artifact("difference.csv").string(), s);
    if (s.failed) {
      manifest_["failure_time"] = s.failure_time;
      throw NumericalError(s.failure_kind + ": " + s.failure);
    }
    stage = "fit";
    const FitWindow w{config_.fit.t_begin, config_.fit.t_end};
    const DifferenceCheck c = difference_decay_check(s, w, config_.fit.min_gap, config_.fit.match_tol);
    const VelocityLowerBoundCheck v = velocity_lower_bound_check(s, w, config_.fit.match_tol);
    write_fits({c.linear, c.difference, c.full, v.fit});
    manifest_["difference"] = {{"gap", c.gap},
                               {"linear_exponent", c.linear.exponent},
                               {"difference_exponent", c.difference.exponent},
                               {"full_exponent", c.full.exponent},
                               {"velocity_min_margin", v.min_margin}};
    check("difference_gap", c.gap_ok);
    check("full_matches_linear", c.full_matches_linear);
    check("velocity_pointwise_bound", v.pointwise_ok);
  }

  void fit(std::string& stage) {
    stage = "input";
    std::ifstream in(config_.fit.input);
    if (!in) throw FormatError("cannot read " + config_.fit.input);
    std::string line;
    if (!std::getline(in, line)) throw FormatError(config_.fit.input + ": empty file");
    std::vector<std::string> header;
    {
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) header.push_back(cell);
    }
    auto col = [&](const std::string& name, const char* key) {
      auto it = std::find(header.begin(), header.end(), name);
      if (it == header.end()) throw ConfigError(key, "column '" + name + "' not in " + config_.fit.input);
      return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t ti = col("t", "fit.input"), vi = col(config_.fit.column, "fit.column");
    std::vector<double> t, v;
    std::size_t row = 1;
    while (std::getline(in, line)) {
      ++row;
      if (line.empty()) continue;
      std::vector<double> cells;
      std::size_t pos = 0;
      while (pos <= line.size()) {
        const std::size_t end = std::min(line.find(',', pos), line.size());
        double x = 0.0;
        const auto r = std::from_chars(line.data() + pos, line.data() + end, x);
        if (r.ec != std::errc() || r.ptr != line.data() + end)
          throw FormatError(config_.fit.input + ": bad number on line " + std::to_string(row));
        cells.push_back(x);
        pos = end + 1;
      }
      if (cells.size() != header.size())
        throw FormatError(config_.fit.input + ": wrong column count on line " + std::to_string(row));
      t.push_back(cells[ti]);
      v.push_back(cells[vi]);
    }
    stage = "fit";
    const DecayFitResult f = fit_power_law(t, v, {config_.fit.t_begin, config_.fit.t_end}, config_.fit.target,
                                           config_.fit.tolerance, config_.fit.mode, config_.fit.column);
    write_fits({f});
    check(f.label, f.pass);
  }

  void report(std::string& stage) {
    GeneratedData data = initial(stage);
    const PerturbationState& s = data.state;
    const NormReport n = norm_report(s);
    const RealState rs = s.to_real();
    const double residual = admissible_residual(rs.rho, velocity_from_momentum(rs.rho, rs.m), s.grid(), config_.fluid);
    const EnergyReport e = energy_report(s, config_.fluid, config_.energy, config_.solver.rho_min);
    stage = "output";
    write_energy_csv(artifact("energy.csv").string(), {e});
    write_checkpoint(artifact("initial.ckpt").string(), s, config_.fluid);
    Json r;
    r["scale"] = data.scale;
    r["norms"] = {{"rho_l1", n.rho_l1}, {"rho_l2", n.rho_l2}, {"rho_h1", n.rho_h1}, {"rho_h2", n.rho_h2},
                  {"u_l1", n.u_l1},     {"u_l2", n.u_l2},     {"u_h1", n.u_h1},     {"u_h2", n.u_h2}};
    r["admissible_residual"] = residual;
    r["min_density"] = e.min_density;
    r["dealias_cutoff"] = s.grid().dealias_cutoff();
    std::ofstream out(artifact("report.json"), std::ios::binary | std::ios::trunc);
    out << r.dump(2) << '\n';
    check("density_floor", e.density_floor_ok);
  }

  void write_manifest(double wall) {
    Json m;
    m["schema_version"] = kSchemaVersion;
    m["kind"] = to_string(kind_);
    m["status"] = outcome_.status;
    m["exit_code"] = outcome_.exit_code;
    m["failure_stage"] = outcome_.stage.empty() ? Json(nullptr) : Json(outcome_.stage);
    m["failure"] = outcome_.message.empty() ? Json(nullptr) : Json(outcome_.message);
    m["config_hash"] = hex64(config_.hash());
    Json cfg = Json::object();
    for (const auto& k : keys()) cfg[k.name] = k.get(config_);
    m["config"] = cfg;
    m["versions"] = {{"cnsdecay", CNSDECAY_VERSION},
                     {"fftw", fft_library_version()},
                     {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                   std::to_string(EIGEN_MINOR_VERSION)},
                     {"boost", BOOST_LIB_VERSION}};
    m["threads"] = options_.threads;
    m["wall_time_seconds"] = wall;
    m["checks"] = checks_;
    m["checks_passed"] = outcome_.checks_passed;
    m["checkpoints"] = checkpoint_index_;
    m["artifacts"] = outcome_.artifacts;
    m["notes"] = notes_;
    for (auto& [k, v] : manifest_.items()) m[k] = v;
    std::error_code ec;
    fs::create_directories(dir_, ec);
    std::ofstream out(dir_ / "manifest.json", std::ios::binary | std::ios::trunc);
    if (out) out << m.dump(2) << '\n';
  }

  RunKind kind_;
  const RunConfig& config_;
  RunOptions options_;
  fs::path dir_;
  RunOutcome outcome_;
  Json checks_ = Json::object();
  Json manifest_ = Json::object();
  Json checkpoint_index_ = Json::array();
  std::vector<std::string> notes_;
};

}  // namespace

RunOutcome run(RunKind kind, const RunConfig& config, const RunOptions& options) {
  return RunContext(kind, config, options).execute();
}

RunOutcome run_file(RunKind kind, const std::string& config_path, const Overrides& overrides,
                    const RunOptions& options) {
  RunConfig config;
  try {
    config = load_config(config_path);
  } catch (const ConfigError& e) {
    if (overrides.output_dir) config.output_dir = *overrides.output_dir;
    return RunContext(kind, config, options).reject(e.what());
  }
  if (overrides.output_dir) config.output_dir = *overrides.output_dir;
  if (overrides.seed) config.initial.seed = *overrides.seed;
  return run(kind, config, options);
}

}  // namespace cnsdecay::harness
