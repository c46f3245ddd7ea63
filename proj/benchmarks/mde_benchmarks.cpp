#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "mde/dynamics.hpp"
#include "mde/sir.hpp"
#include "mde/transport.hpp"

namespace {

mde::DiscreteMeasure random_measure(std::mt19937_64& rng, int atoms) {
  std::uniform_real_distribution<double> pos(-3.0, 3.0);
  std::uniform_real_distribution<double> mass(0.05, 2.0);
  std::vector<mde::Atom> out;
  for (int k = 0; k < atoms; ++k) out.push_back({pos(rng), mass(rng)});
  return mde::DiscreteMeasure(std::move(out));
}

void BM_GeneralizedWasserstein(benchmark::State& state) {
  std::mt19937_64 rng(5);
  const auto mu = random_measure(rng, static_cast<int>(state.range(0)));
  const auto nu = random_measure(rng, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(mde::generalized_wasserstein(mu, nu).value);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GeneralizedWasserstein)->RangeMultiplier(4)->Range(4, 256)->Complexity();

void BM_LasStepCumulative(benchmark::State& state) {
  const mde::GridSpec grid(state.range(0));
  const auto pvf = mde::PvfSpec::cumulative_phi(mde::PiecewiseLinearFn::linear(0.0, -0.5, 1.0, 0.5));
  // A spread-out state: one unit of time from a point mass.
  const auto mu = mde::las_trajectory(mde::DiscreteMeasure::dirac(0.0), pvf, grid, 1.0).final_state().measure;
  for (auto _ : state) benchmark::DoNotOptimize(mde::las_step(mu, pvf, grid));
  state.counters["atoms"] = static_cast<double>(mu.size());
}
BENCHMARK(BM_LasStepCumulative)->Arg(20)->Arg(40)->Arg(80);

void BM_SirClassical(benchmark::State& state) {
  mde::sir::EpidemicParams p;
  p.beta = mde::PiecewiseLinearFn::constant(0.3);
  p.nu = mde::PiecewiseLinearFn::constant(0.1);
  const mde::sir::EpidemicState initial{0.99, mde::DiscreteMeasure::dirac(0.0, 0.01), 0.0};
  const mde::GridSpec grid(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mde::sir::simulate(p, initial, grid, 50.0).states.size());
}
BENCHMARK(BM_SirClassical)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
