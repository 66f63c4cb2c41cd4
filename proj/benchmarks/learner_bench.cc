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

#include "fedsched/learner.h"
#include "fedsched/rng.h"
#include "fedsched/streaming.h"

namespace fedsched {
namespace {

void BM_LocalTrain(benchmark::State& state) {
  Rng rng = rng_for(9, StreamPurpose::kTest);
  const auto data = synth_corpus(10, 500, 20, 2.5, rng);
  const auto arch = state.range(0) == 0 ? ModelArch::Softmax(20, 10)
                                        : ModelArch::Mlp(20, 32, 10);
  const auto model = init_model(arch, rng);
  const SgdConfig sgd;
  for (auto _ : state) {
    benchmark::DoNotOptimize(local_train(model, data, sgd, rng));
  }
}
BENCHMARK(BM_LocalTrain)->Arg(0)->Arg(1);

void BM_Evaluate(benchmark::State& state) {
  Rng rng = rng_for(10, StreamPurpose::kTest);
  const auto data = synth_corpus(10, 2000, 20, 2.5, rng);
  const auto model = init_model(ModelArch::Softmax(20, 10), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(model, data));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(data.size()));
}
BENCHMARK(BM_Evaluate);

}  // namespace
}  // namespace fedsched
