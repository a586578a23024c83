#include <benchmark/benchmark.h>

#include <numbers>
#include <random>

#include "lambda_mixer/analysis.hpp"
#include "lambda_mixer/validation.hpp"

using namespace lambda_mixer;

namespace {

FieldState sample_state() {
  std::mt19937_64 rng(7);
  return random_field_state(rng);
}

void BM_RhsClosedForm(benchmark::State& state) {
  const FieldState f = sample_state();
  const SystemParams p;
  for (auto _ : state) benchmark::DoNotOptimize(rhs_closed_form(f, p, true));
}
BENCHMARK(BM_RhsClosedForm);

void BM_RhsPertGradient(benchmark::State& state) {
  const FieldState f = sample_state();
  const SystemParams p;
  const BackendSpec spec{LevelModel::kFourLevel, Method::kPertEigenGradient, true};
  for (auto _ : state) benchmark::DoNotOptimize(rhs_eigen_gradient(f, p, spec));
}
BENCHMARK(BM_RhsPertGradient);

void BM_RhsExactGradient(benchmark::State& state) {
  const FieldState f = sample_state();
  SystemParams p;
  p.five_level_coupling = FiveLevelCoupling::kSharedStrength;
  const auto model = static_cast<LevelModel>(state.range(0));
  const GroundBranchTracker tracker(model, p);
  for (auto _ : state) benchmark::DoNotOptimize(tracker.evaluate(f));
}
BENCHMARK(BM_RhsExactGradient)->Arg(0)->Arg(1);

void BM_EigExact(benchmark::State& state) {
  const FieldState f = Complex(0.01) * sample_state();
  const auto model = static_cast<LevelModel>(state.range(0));
  const ComplexMatrix h = build_hamiltonian(model, f, SystemParams{});
  for (auto _ : state) benchmark::DoNotOptimize(eig_exact(h));
}
BENCHMARK(BM_EigExact)->Arg(0)->Arg(1);

// One conversion cycle per iteration; range(0) is -log10(ε).
void BM_MeasureConversion(benchmark::State& state) {
  const double eps = std::pow(10.0, -static_cast<double>(state.range(0)));
  const bool phase = state.range(1) != 0;
  const BackendSpec spec{LevelModel::kFourLevel, Method::kClosedForm, phase};
  PropagationGrid g;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        measure_conversion({eps, std::numbers::pi / 4}, spec, SystemParams{}, g));
  }
}
BENCHMARK(BM_MeasureConversion)
    ->Args({2, 0})
    ->Args({4, 0})
    ->Args({2, 1})
    ->Args({4, 1})
    ->Args({6, 1})
    ->Unit(benchmark::kMillisecond);

void BM_IntegrateExact(benchmark::State& state) {
  const BackendSpec spec{LevelModel::kFourLevel, Method::kExactEigenGradient, true};
  PropagationGrid g;
  g.zeta_max = 10.0;
  g.sample_stride = 0.1;
  const FieldState init = seeded_initial_state({1e-2, std::numbers::pi / 4});
  for (auto _ : state) benchmark::DoNotOptimize(integrate(init, SystemParams{}, spec, g));
}
BENCHMARK(BM_IntegrateExact)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
