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

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "fedsched/errors.h"
#include "fedsched/learner.h"

namespace fedsched {
namespace {

std::vector<Sample> random_samples(Rng& rng, int n, int dim, int classes) {
  std::vector<Sample> out;
  for (int i = 0; i < n; ++i) {
    Sample s;
    for (int j = 0; j < dim; ++j) s.features.push_back(static_cast<float>(rng.normal()));
    s.label = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(classes)));
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<const Sample*> pointers(const std::vector<Sample>& v) {
  std::vector<const Sample*> out;
  for (const auto& s : v) out.push_back(&s);
  return out;
}

TEST(ModelArchTest, ParameterCounts) {
  EXPECT_EQ(ModelArch::Softmax(784, 10).param_count(), 7850u);
  EXPECT_EQ(ModelArch::Mlp(784, 32, 10).param_count(), 784u * 32 + 32 + 32 * 10 + 10);
}

TEST(LossTest, ZeroSoftmaxGivesLogC) {
  const auto arch = ModelArch::Softmax(3, 4);
  Rng rng = rng_for(1, StreamPurpose::kTest);
  const auto model = init_model(arch, rng);
  const auto data = random_samples(rng, 20, 3, 4);
  EXPECT_NEAR(evaluate(model, data).loss, std::log(4.0), 1e-12);
}

TEST(LossTest, HandWorkedSoftmaxGradient) {
  // D = 1, C = 2, W = [0, 0], b = [0, 0], x = 2, y = 0.
  // p = (0.5, 0.5); dL/dW = (p - e_y) x = (-1, 1); dL/db = (-0.5, 0.5).
  const auto arch = ModelArch::Softmax(1, 2);
  const std::vector<double> params(4, 0.0);
  const Sample s{{2.0f}, 0};
  const std::vector<const Sample*> batch = {&s};
  std::vector<double> grad(4);
  const double loss = loss_and_gradient(arch, params, batch, grad);
  EXPECT_NEAR(loss, std::log(2.0), 1e-15);
  EXPECT_NEAR(grad[0], -1.0, 1e-15);
  EXPECT_NEAR(grad[1], 1.0, 1e-15);
  EXPECT_NEAR(grad[2], -0.5, 1e-15);
  EXPECT_NEAR(grad[3], 0.5, 1e-15);
}

void check_finite_differences(const ModelArch& arch, std::uint64_t seed) {
  Rng rng = rng_for(seed, StreamPurpose::kTest);
  auto params = std::vector<double>(arch.param_count());
  for (auto& p : params) p = 0.3 * rng.normal();
  const auto data = random_samples(rng, 7, arch.input_dim, arch.num_classes);
  const auto batch = pointers(data);
  std::vector<double> grad(params.size());
  loss_and_gradient(arch, params, batch, grad);
  std::vector<double> scratch(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double h = 1e-5;
    auto plus = params;
    auto minus = params;
    plus[i] += h;
    minus[i] -= h;
    const double fd = (loss_and_gradient(arch, plus, batch, scratch) -
                       loss_and_gradient(arch, minus, batch, scratch)) /
                      (2 * h);
    EXPECT_LE(std::abs(fd - grad[i]), 1e-5 * std::max(1.0, std::abs(fd))) << "param " << i;
  }
}

TEST(GradientTest, SoftmaxMatchesFiniteDifferences) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    check_finite_differences(ModelArch::Softmax(4, 3), seed);
  }
}

TEST(GradientTest, MlpMatchesFiniteDifferences) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    check_finite_differences(ModelArch::Mlp(4, 5, 3), seed);
  }
}

TEST(LocalTrainTest, ZeroLearningRateGivesZeroDelta) {
  const auto arch = ModelArch::Softmax(3, 2);
  Rng rng = rng_for(2, StreamPurpose::kTest);
  const auto model = init_model(arch, rng);
  const auto data = random_samples(rng, 10, 3, 2);
  const auto update = local_train(model, data, {5, 4, 0.0}, rng);
  EXPECT_EQ(update.data_size, 10u);
  for (double d : update.delta) EXPECT_EQ(d, 0.0);
}

TEST(LocalTrainTest, EmptyDataThrows) {
  const auto arch = ModelArch::Softmax(3, 2);
  Rng rng = rng_for(3, StreamPurpose::kTest);
  const auto model = init_model(arch, rng);
  EXPECT_THROW(local_train(model, {}, {}, rng), EmptyDatasetError);
  EXPECT_THROW(evaluate(model, {}), EmptyDatasetError);
}

TEST(LocalTrainTest, ReducesLossOnItsOwnData) {
  const auto arch = ModelArch::Softmax(2, 2);
  Rng rng = rng_for(4, StreamPurpose::kTest);
  auto model = init_model(arch, rng);
  std::vector<Sample> data;
  for (int i = 0; i < 50; ++i) {
    data.push_back({{1.0f + 0.1f * static_cast<float>(rng.normal()), 0.0f}, 0});
    data.push_back({{-1.0f + 0.1f * static_cast<float>(rng.normal()), 0.0f}, 1});
  }
  const double before = evaluate(model, data).loss;
  const auto update = local_train(model, data, {20, 16, 0.5}, rng);
  const std::vector<LocalUpdate> ups = {update};
  model = aggregate(model, ups);
  EXPECT_LT(evaluate(model, data).loss, before);
}

TEST(AggregateTest, WeightsBySampleCount) {
  GlobalModel model{ModelArch::Softmax(1, 1), {1.0, 2.0}};
  const std::vector<LocalUpdate> ups = {{{3.0, 0.0}, 1}, {{0.0, 6.0}, 2}};
  const auto out = aggregate(model, ups);
  EXPECT_DOUBLE_EQ(out.params[0], 1.0 + 3.0 / 3.0);
  EXPECT_DOUBLE_EQ(out.params[1], 2.0 + 6.0 * 2.0 / 3.0);
}

TEST(AggregateTest, EmptyListLeavesModelUnchanged) {
  GlobalModel model{ModelArch::Softmax(1, 1), {1.0, 2.0}};
  EXPECT_EQ(aggregate(model, {}).params, model.params);
}

TEST(AggregateTest, LengthMismatchThrows) {
  GlobalModel model{ModelArch::Softmax(1, 1), {1.0, 2.0}};
  const std::vector<LocalUpdate> ups = {{{1.0}, 1}};
  EXPECT_THROW(aggregate(model, ups), DimensionMismatchError);
}

TEST(EvaluateTest, ArgmaxTiesGoToFirstClass) {
  GlobalModel model{ModelArch::Softmax(1, 3), std::vector<double>(6, 0.0)};
  const std::vector<Sample> data = {{{1.0f}, 0}, {{1.0f}, 2}};
  EXPECT_DOUBLE_EQ(evaluate(model, data).accuracy, 0.5);
}

TEST(SyntheticLearningTest, InseparableDataStaysNearChance) {
  Rng rng = rng_for(5, StreamPurpose::kTrainCorpus);
  const auto train = synth_corpus(10, 2000, 10, 0.0, rng);
  const auto test = synth_corpus(10, 2000, 10, 0.0, rng);
  auto model = init_model(ModelArch::Softmax(10, 10), rng);
  const std::vector<LocalUpdate> ups = {local_train(model, train, {200, 32, 0.1}, rng)};
  model = aggregate(model, ups);
  EXPECT_NEAR(evaluate(model, test).accuracy, 0.1, 0.04);
}

TEST(SyntheticLearningTest, WellSeparatedDataIsLearnt) {
  Rng rng = rng_for(6, StreamPurpose::kTrainCorpus);
  const auto train = synth_corpus(10, 2000, 10, 8.0, rng);
  const auto test = synth_corpus(10, 2000, 10, 8.0, rng);
  auto model = init_model(ModelArch::Softmax(10, 10), rng);
  const std::vector<LocalUpdate> ups = {local_train(model, train, {300, 32, 0.1}, rng)};
  model = aggregate(model, ups);
  EXPECT_GT(evaluate(model, test).accuracy, 0.95);
}

}  // namespace
}  // namespace fedsched
