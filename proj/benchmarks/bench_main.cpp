#include <benchmark/benchmark.h>

#include "sglab/dyson_phillips.hpp"
#include "sglab/extrapolation.hpp"
#include "sglab/perturbation.hpp"
#include "sglab/sampling.hpp"
#include "sglab/volterra_oracle.hpp"

namespace {

using namespace sglab;

RankOnePerturbation constant_perturbation(std::size_t n) {
  return make_rank_one(std::vector<double>(n + 1, 1.0),
                       ExtrapolatedElement::from_density(SpaceTag::ShiftSpace,
                                                         std::vector<double>(n + 1, 1.0)));
}

void BM_ResolventShift(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const GeneratorSpec gen = GeneratorSpec::nilpotent_left_shift();
  const GridFunction f = ramp_down(n);
  for (auto _ : state) benchmark::DoNotOptimize(resolvent(gen, 1.0, f));
}
BENCHMARK(BM_ResolventShift)->Arg(1000)->Arg(4000);

void BM_ExtrapolatedResolvent(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const GeneratorSpec gen = GeneratorSpec::nilpotent_left_shift();
  const auto h = ExtrapolatedElement::from_density(SpaceTag::ShiftSpace,
                                                   std::vector<double>(n + 1, 1.0));
  for (auto _ : state) benchmark::DoNotOptimize(extrapolated_resolvent(gen, 1.0, h));
}
BENCHMARK(BM_ExtrapolatedResolvent)->Arg(2000);

void BM_TrapezoidConvolution(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> a(n + 1, 0.5), b(n + 1, 0.25);
  for (auto _ : state) benchmark::DoNotOptimize(trapezoid_convolution(a, b, 1e-3));
}
BENCHMARK(BM_TrapezoidConvolution)->Arg(500)->Arg(2000);

void BM_EngineConstruction(benchmark::State& state) {
  const std::size_t n = 1000;
  const GeneratorSpec gen = GeneratorSpec::nilpotent_left_shift();
  const RankOnePerturbation B = constant_perturbation(n);
  DpConfig cfg;
  cfg.dt = 1e-3;
  for (auto _ : state) benchmark::DoNotOptimize(DysonPhillipsEngine(gen, B, cfg));
}
BENCHMARK(BM_EngineConstruction);

void BM_DpEvolve(benchmark::State& state) {
  const std::size_t n = 500;
  const GeneratorSpec gen = GeneratorSpec::nilpotent_left_shift();
  const RankOnePerturbation B = constant_perturbation(n);
  const GridFunction u0 = ramp_down(n);
  DpConfig cfg;
  cfg.dt = 2e-3;
  cfg.tau = 0.5;
  cfg.tol_tail = 1e-8;
  for (auto _ : state) benchmark::DoNotOptimize(dp_evolve(gen, B, cfg, u0, {0.5}));
}
BENCHMARK(BM_DpEvolve);

void BM_VolterraMass(benchmark::State& state) {
  const std::size_t n = 1000;
  const GridFunction u0 = ramp_down(n);
  const std::vector<double> h(n + 1, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(volterra_mass(u0, h, 1.0, 2e-4));
}
BENCHMARK(BM_VolterraMass);

}  // namespace

BENCHMARK_MAIN();
