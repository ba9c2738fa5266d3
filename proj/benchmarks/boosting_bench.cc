// Copyright 2026 The bopl Authors.
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

#include "bench_data.hpp"
#include "bopl/boosting.hpp"

namespace bopl {
namespace {

// Ten rounds of BOPL; arguments are n, feature count and depth. The last
// configuration matches the Scene log size and tree settings.
void BM_TrainRounds(benchmark::State& state) {
  const BanditDataset data =
      bench::SyntheticLog(static_cast<std::size_t>(state.range(0)), 6,
                          static_cast<int>(state.range(1)));
  BoostConfig config;
  config.rounds = 10;
  config.stop_threshold = 0.0;
  config.tree.max_depth = static_cast<int>(state.range(2));
  config.tree.min_child_weight = 60;
  config.reward_translation = -0.2;
  for (auto _ : state) benchmark::DoNotOptimize(Train(data, config));
  state.counters["rounds_per_s"] =
      benchmark::Counter(10.0 * static_cast<double>(state.iterations()),
                         benchmark::Counter::kIsRate);
}
BENCHMARK(BM_TrainRounds)
    ->Args({500, 20, 6})
    ->Args({1700, 294, 12})
    ->Unit(benchmark::kMillisecond);

void BM_TrainBrrRounds(benchmark::State& state) {
  const BanditDataset data = bench::SyntheticLog(1700, 6, 294);
  BoostConfig config;
  config.algorithm = Algorithm::kBrr;
  config.rounds = 10;
  config.stop_threshold = 0.0;
  config.shrinkage = 0.1;
  config.tree.max_depth = 12;
  config.tree.min_child_weight = 60;
  for (auto _ : state) benchmark::DoNotOptimize(TrainBrr(data, config));
}
BENCHMARK(BM_TrainBrrRounds)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace bopl
