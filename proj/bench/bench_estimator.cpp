// Copyright 2026 The fairorder Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference vs OpenMP estimator on the pair scenario. Both produce
// the same report; only wall time should differ.

#include <benchmark/benchmark.h>

#include "commands.hpp"
#include "fairorder/fairness_stats.hpp"
#include "fairorder/shared_randomizer.hpp"

namespace {

using namespace fairorder;

const Simulator& pair_sim() {
  static const ScenarioConfig s = cli::pair_scenario(1.0, 1.0);
  static const Simulator sim(s, s.policy);
  return sim;
}

void BM_EstimatorSerial(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    auto r = estimate_order_probability_serial(pair_sim(), {1, 2}, n, RngSeed{1});
    benchmark::DoNotOptimize(r.count_first);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EstimatorParallel(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    auto r = estimate_order_probability(pair_sim(), {1, 2}, n, RngSeed{1});
    benchmark::DoNotOptimize(r.count_first);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_RandomizerSweep(benchmark::State& state) {
  NoiseSpec spec;
  const ReplicaSet rs{4, 1, {3}};
  for (auto _ : state) {
    auto s = sweep_randomizer(rs, spec, static_cast<std::uint64_t>(state.range(0)), RngSeed{2},
                              ByzantineStrategy::constant_output);
    benchmark::DoNotOptimize(s.mean);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_EstimatorSerial)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EstimatorParallel)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RandomizerSweep)->Arg(100'000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
