#include <benchmark/benchmark.h>

#include "cnsdecay/continuum.hpp"
#include "cnsdecay/initial_data.hpp"
#include "cnsdecay/nonlinear.hpp"
#include "cnsdecay/semigroup.hpp"
#include "cnsdecay/solver.hpp"

using namespace cnsdecay;

namespace {

PerturbationState bench_state(int n) {
  SpectralGrid grid(6.283185307179586, n);
  InitialDataSpec spec;
  spec.kind = DataKind::generic_eta;
  spec.k_cut = 0.9 * grid.dealias_cutoff();
  spec.width = 2.0;
  spec.amplitude = 0.05;
  return generate(spec, grid).state;
}

}  // namespace

static void ForwardFFT(benchmark::State& state) {
  SpectralGrid grid(1.0, static_cast<int>(state.range(0)));
  RealField f(grid.real_size(), 0.25);
  SpectralField out = grid.zeros_spectral();
  for (auto _ : state) {
    grid.forward(f, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(ForwardFFT)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void InverseFFT(benchmark::State& state) {
  SpectralGrid grid(1.0, static_cast<int>(state.range(0)));
  SpectralField c = grid.zeros_spectral();
  c[1] = {1.0, 0.5};
  RealField out = grid.zeros_real();
  for (auto _ : state) {
    grid.inverse(c, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(InverseFFT)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void MomentumFormTerms(benchmark::State& state) {
  const PerturbationState s = bench_state(static_cast<int>(state.range(0)));
  const FluidParams params{1.0, 0.0, 1.4};
  SpectralField out_rho;
  SpectralVector out;
  for (auto _ : state) {
    momentum_form_terms(s.grid(), s.rho_hat(), s.m_hat(), params, true, out);
    benchmark::DoNotOptimize(out[0].data());
  }
}
BENCHMARK(MomentumFormTerms)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void VelocityFormTerms(benchmark::State& state) {
  const PerturbationState s = bench_state(static_cast<int>(state.range(0)));
  const FluidParams params{1.0, 0.0, 1.4};
  const SpectralVector u = s.velocity_hat();
  SpectralField s1;
  SpectralVector s2;
  for (auto _ : state) {
    velocity_form_terms(s.grid(), s.rho_hat(), u, params, true, s1, s2);
    benchmark::DoNotOptimize(s2[0].data());
  }
}
BENCHMARK(VelocityFormTerms)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void SemigroupApply(benchmark::State& state) {
  const PerturbationState s = bench_state(static_cast<int>(state.range(0)));
  const ShellTable table = semigroup_table(s.grid(), FluidParams{}, 0.5);
  SpectralField rho = s.grid().zeros_spectral();
  SpectralVector m{rho, rho, rho};
  for (auto _ : state) {
    table.apply(s.rho_hat(), s.m_hat(), rho, m);
    benchmark::DoNotOptimize(rho.data());
  }
}
BENCHMARK(SemigroupApply)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void EvolutionStep(benchmark::State& state) {
  const PerturbationState s = bench_state(64);
  SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 1e6;
  cfg.integrator = state.range(0) == 1 ? Integrator::exponential_euler : Integrator::exponential_rk2;
  Evolution evo(s, FluidParams{}, cfg);
  for (auto _ : state) evo.step();
}
BENCHMARK(EvolutionStep)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

static void ContinuumNorm(benchmark::State& state) {
  const RadialProfileData data = floor_gaussian_profile(1.0, 0.5);
  const double t = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(linear_l2_norm_continuum(data, FluidParams{}, t));
}
BENCHMARK(ContinuumNorm)->Arg(1)->Arg(100)->Arg(10000)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
