// Copyright 2026 The minimax-ope Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <vector>

#include "ope/experiments.h"
#include "ope/monte_carlo.h"
#include "ope/subset_solver.h"

namespace {

void run(benchmark::State& state, ope::Execution execution) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const ope::BanditInstance instance = ope::switch_scaling_instance(k, 1.0);
  const std::size_t n = k * 3 / 2;
  const auto sol = ope::solve_optimal_subset(instance.target(), instance.behavior(), n);
  const std::vector<ope::EstimatorSpec> specs{ope::EstimatorSpec::plug_in(),
                                              ope::EstimatorSpec::importance_sampling(),
                                              ope::EstimatorSpec::switch_at(sol.s_star)};
  const std::size_t trials = 2000;
  for (auto _ : state) {
    auto reports = ope::monte_carlo_mse(specs, instance, n, trials, 1,
                                        ope::SamplingMode::kMultinomial, execution);
    benchmark::DoNotOptimize(reports);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * trials));
}

void BM_MonteCarloSerial(benchmark::State& state) { run(state, ope::Execution::kSerial); }
void BM_MonteCarloParallel(benchmark::State& state) { run(state, ope::Execution::kParallel); }

BENCHMARK(BM_MonteCarloSerial)->Arg(100)->Arg(400)->Arg(1600)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MonteCarloParallel)->Arg(100)->Arg(400)->Arg(1600)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
