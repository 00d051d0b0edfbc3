// Banded adiabatic-frame generator against the dense reference, and the
// OpenMP sweep / trajectory drivers against their serial references.

#include <benchmark/benchmark.h>

#include <random>

#include "majorana/experiments.hpp"
#include "majorana/factorization.hpp"

using namespace majorana;

namespace {

NoiseConfig hot_jx() {
  NoiseConfig n;
  n.coupling = Coupling::Jx;
  n.gamma_flat = 0.05;
  n.temperature = 10.0;
  return n;
}

ComplexMatrix some_state(int d) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  ComplexMatrix a(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) a(r, c) = Complex(g(rng), g(rng));
  ComplexMatrix rho = a * a.adjoint();
  return rho / rho.trace();
}

void BM_RhsBanded(benchmark::State& state) {
  const auto p = ModelParams::figure_defaults(HalfInteger(static_cast<int>(state.range(0))));
  const MasterEquation eq(p, hot_jx());
  const ComplexMatrix rho = some_state(p.j.dim());
  double t = -3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eq(t, rho));
    t += 1e-3;  // defeat the frame cache, as a real step sequence mostly does
  }
}
BENCHMARK(BM_RhsBanded)->DenseRange(1, 5);

void BM_RhsReference(benchmark::State& state) {
  const auto p = ModelParams::figure_defaults(HalfInteger(static_cast<int>(state.range(0))));
  const auto s = build_spin(p.j);
  const ComplexMatrix rho = some_state(p.j.dim());
  double t = -3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lindblad_rhs_reference(t, rho, p, hot_jx(), s));
    t += 1e-3;
  }
}
BENCHMARK(BM_RhsReference)->DenseRange(1, 5);

SweepSpec small_sweep() {
  SweepSpec spec;
  spec.j_list = {HalfInteger(1), HalfInteger(2), HalfInteger(3)};
  spec.gamma_grid = {1e-3, 1e-2};
  spec.channels = {Coupling::Jz, Coupling::Jx};
  spec.temperatures = {0.001};
  spec.model = ModelParams::figure_defaults(HalfInteger(1));
  spec.model.t0 = 30.0;
  return spec;
}

void BM_SweepSerial(benchmark::State& state) {
  const auto spec = small_sweep();
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep_serial(spec));
}
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);

void BM_SweepParallel(benchmark::State& state) {
  const auto spec = small_sweep();
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(spec));
}
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond);

ClassicalNoiseConfig small_ensemble() {
  ClassicalNoiseConfig c;
  c.n_spins = 2;
  c.alpha = 0.05;
  c.n_traj = 512;
  c.seed = 3;
  c.dt = 0.025;
  return c;
}

ModelParams short_window() {
  ModelParams p = ModelParams::figure_defaults(HalfInteger(1));
  p.kappa = 1.0;
  p.t0 = 2.5;
  return p;
}

void BM_EnsembleSerial(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(
        classical_noise_ensemble_serial(short_window(), small_ensemble(), IntegratorConfig{}));
}
BENCHMARK(BM_EnsembleSerial)->Unit(benchmark::kMillisecond);

void BM_EnsembleParallel(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(
        classical_noise_ensemble(short_window(), small_ensemble(), IntegratorConfig{}));
}
BENCHMARK(BM_EnsembleParallel)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
