#include <benchmark/benchmark.h>

#include <random>

#include "formcalc/evolution.hpp"
#include "formcalc/pseudostructure.hpp"
#include "support.hpp"

using namespace formcalc;
using namespace formcalc::testing;

namespace {

std::vector<ClosureCase> closure_cases(int count) {
  std::mt19937_64 rng(7001);
  std::vector<ClosureCase> cases;
  for (int i = 0; i < count; ++i) {
    const int n = 3 + i % 2;
    const int k = 2;
    Pseudostructure pi = random_immersion(rng, k, n);
    Form theta = random_form(rng, pi.ambient(), 1, 3, 3);
    cases.push_back({std::move(pi), std::move(theta)});
  }
  return cases;
}

std::vector<BalanceSystem> balance_systems(int count) {
  std::mt19937_64 rng(7002);
  std::vector<BalanceSystem> systems;
  for (int i = 0; i < count; ++i) {
    const int n = 3 + i % 2;
    const Coords x = default_coords(n, "xi");
    BalanceSystem b{x, {}, "psi", std::nullopt};
    for (int j = 0; j < n; ++j) b.A.push_back(random_poly(rng, x, 4, 4));
    b.manifold = Manifold(x, random_connection(rng, n, i % 3 == 0));
    systems.push_back(std::move(b));
  }
  return systems;
}

void BM_ClosureSerial(benchmark::State& state) {
  const auto cases = closure_cases(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(closure_batch_serial(cases));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ClosureParallel(benchmark::State& state) {
  const auto cases = closure_cases(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(closure_batch(cases));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_RelationSerial(benchmark::State& state) {
  const auto systems = balance_systems(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(relation_batch_serial(systems));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_RelationParallel(benchmark::State& state) {
  const auto systems = balance_systems(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(relation_batch(systems));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_ClosureSerial)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ClosureParallel)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RelationSerial)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RelationParallel)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
