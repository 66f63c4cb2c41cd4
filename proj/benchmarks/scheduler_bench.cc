// Copyright 2026 The Authors.
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

#include <algorithm>
#include <vector>

#include "fedsched/config.h"
#include "fedsched/physics.h"
#include "fedsched/rng.h"
#include "fedsched/scheduler.h"

namespace fedsched {
namespace {

std::vector<Candidate> make_candidates(int k) {
  Rng rng = rng_for(7, StreamPurpose::kTest);
  std::vector<Candidate> c;
  for (int id = 0; id < k; ++id) {
    c.push_back({id, rng.uniform(0.0, 0.1), rng.uniform(0.02e9, 1.52e9),
                 rng.uniform(0.0, 3.0), rng.uniform(0.316, 1.995)});
  }
  return c;
}

void BM_Schedule(benchmark::State& state) {
  const SystemConfig cfg;
  const auto c = make_candidates(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(schedule(c, 4, cfg));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Schedule)->RangeMultiplier(4)->Range(8, 2048)->Complexity();

// Exhaustive minimisation over all 4-subsets, for scale.
void BM_ExhaustiveSchedule(benchmark::State& state) {
  const SystemConfig cfg;
  const auto c = make_candidates(static_cast<int>(state.range(0)));
  const int k = static_cast<int>(c.size());
  for (auto _ : state) {
    double best = 0.0;
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
      if (__builtin_popcount(mask) != 4) continue;
      double total = 0.0;
      for (int i = 0; i < k; ++i) {
        if (mask & (1u << i)) {
          total += per_device_score(c[i].queue, c[i].cpu_freq, c[i].importance,
                                    c[i].beta, 4, cfg);
        }
      }
      best = std::min(best, total);
    }
    benchmark::DoNotOptimize(best);
  }
}
BENCHMARK(BM_ExhaustiveSchedule)->DenseRange(8, 16, 4);

void BM_Prune(benchmark::State& state) {
  const SystemConfig cfg;
  Rng rng = rng_for(8, StreamPurpose::kTest);
  std::vector<TrainedDevice> set;
  for (int i = 0; i < state.range(0); ++i) {
    const double beta = rng.uniform(0.316, 1.995);
    set.push_back({i, draw_channel(beta, rng) * 1e-6, beta,
                   compute_time(rng.uniform(0.2e9, 1.52e9), cfg)});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(prune(set, cfg));
  }
}
BENCHMARK(BM_Prune)->Arg(2)->Arg(8)->Arg(32);

}  // namespace
}  // namespace fedsched
