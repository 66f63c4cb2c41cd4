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

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "fedsched/physics.h"
#include "fedsched/scheduler.h"
#include "oracles.h"

namespace fedsched {
namespace {

TEST(QueueUpdateTest, FollowsClampedRecursion) {
  EXPECT_NEAR(queue_update(0.01, true, 0.0003, 0.0005), 0.0098, 1e-15);
  EXPECT_EQ(queue_update(0.0, false, 0.0, 0.0005), 0.0);
  EXPECT_NEAR(queue_update(0.0, true, 0.001, 0.0005), 0.0005, 1e-15);
  // Unscheduled devices ignore E.
  EXPECT_EQ(queue_update(0.002, false, 10.0, 0.0005), 0.002 - 0.0005);
}

TEST(QueueUpdateTest, NonNegativeAndDecreaseBoundedByBudget) {
  Rng rng = rng_for(1, StreamPurpose::kTest);
  double q = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const bool s = rng.uniform() < 0.3;
    const double e = rng.uniform(0.0, 0.002);
    const double next = queue_update(q, s, e, 0.0005);
    EXPECT_GE(next, 0.0);
    EXPECT_GE(next, q - 0.0005);
    q = next;
  }
}

SystemConfig unit_margin() {
  SystemConfig cfg;
  cfg.rate_margin = 1.0;
  return cfg;
}

TEST(FeasibleSetTest, ReferenceDeviceFitsTheRound) {
  const auto cfg = unit_margin();
  // 0.419328 + 0.0036273 <= 4.
  EXPECT_TRUE(meets_latency_budget(1e9, 2, cfg));
  const std::vector<double> f = {1e9, cfg.cycles_c / 4.5, 2e8};
  EXPECT_EQ(feasible_set(f, 2, cfg), (std::vector<int>{0, 2}));
}

TEST(FeasibleSetTest, SlowCpuIsInfeasibleRegardlessOfChannel) {
  const auto cfg = unit_margin();
  EXPECT_FALSE(meets_latency_budget(cfg.cycles_c / 4.01, 1, cfg));
}

TEST(FeasibleSetTest, VanishingMarginMakesEveryoneInfeasible) {
  auto cfg = unit_margin();
  cfg.rate_margin = 1e-6;
  const std::vector<double> f = {1.5e9, 1.0e9, 0.5e9};
  EXPECT_TRUE(feasible_set(f, 2, cfg).empty());
}

TEST(ScoreTest, ZeroQueueIsPureImportance) {
  const auto cfg = unit_margin();
  EXPECT_DOUBLE_EQ(per_device_score(0.0, 1e9, 1.7, 1.0, 2, cfg), -cfg.tradeoff_V * 1.7);
}

TEST(ScoreTest, ZeroTradeoffIsPureEnergyPenalty) {
  auto cfg = unit_margin();
  cfg.tradeoff_V = 0.0;
  EXPECT_GT(per_device_score(0.01, 1e9, 3.0, 0.5, 2, cfg), 0.0);
}

TEST(ScoreTest, WorkedExample) {
  const auto cfg = unit_margin();
  const double expected = 0.01 * 0.419328 - 0.05 + 2.2886761272562818e-05;
  EXPECT_NEAR(per_device_score(0.01, 1e9, 1.0, 1.0, 2, cfg), expected, 1e-15);
  EXPECT_NEAR(per_device_score(0.01, 1e9, 1.0, 1.0, 2, cfg), -0.04578383323872744,
              1e-15);
}

TEST(ScheduleTest, TiesGoToLowerIds) {
  const auto cfg = unit_margin();
  std::vector<Candidate> c;
  for (int id : {5, 3, 9, 1}) c.push_back({id, 0.0, 1e9, 1.0, 1.0});
  EXPECT_EQ(schedule(c, 2, cfg).scheduled, (std::vector<int>{1, 3}));
}

TEST(ScheduleTest, ClampsToFeasibleCount) {
  const auto cfg = unit_margin();
  const std::vector<Candidate> c = {{4, 0.1, 1e9, 0.0, 1.0}};
  EXPECT_EQ(schedule(c, 3, cfg).scheduled, (std::vector<int>{4}));
  EXPECT_TRUE(schedule({}, 3, cfg).scheduled.empty());
}

TEST(ScheduleTest, FillsCardinalityEvenWithPositiveScoresUnlessShrinkAllowed) {
  auto cfg = unit_margin();
  cfg.tradeoff_V = 0.0;
  const std::vector<Candidate> c = {{0, 1.0, 1e9, 0.0, 1.0}, {1, 1.0, 1.2e9, 0.0, 1.0}};
  EXPECT_EQ(schedule(c, 2, cfg).scheduled.size(), 2u);
  cfg.allow_shrink = true;
  EXPECT_TRUE(schedule(c, 2, cfg).scheduled.empty());
}

std::vector<Candidate> random_candidates(Rng& rng, int count) {
  std::vector<Candidate> c;
  for (int i = 0; i < count; ++i) {
    c.push_back({i * 3 + 1, rng.uniform(0.0, 0.1), rng.uniform(0.02e9, 1.52e9),
                 rng.uniform(0.0, 3.0), rng.uniform(0.316, 1.995)});
  }
  return c;
}

TEST(ScheduleTest, MatchesExhaustiveSearchOnSixDevices) {
  const SystemConfig cfg;
  Rng rng = rng_for(2, StreamPurpose::kTest);
  for (int trial = 0; trial < 200; ++trial) {
    const auto c = random_candidates(rng, 6);
    EXPECT_EQ(schedule(c, 2, cfg).scheduled, oracle::brute_force_schedule(c, 2, cfg));
  }
}

TEST(ScheduleTest, ArgminInvariantUnderJointScalingOfQueuesAndTradeoff) {
  SystemConfig cfg;
  Rng rng = rng_for(3, StreamPurpose::kTest);
  for (int trial = 0; trial < 200; ++trial) {
    auto c = random_candidates(rng, 10);
    const int n = 1 + static_cast<int>(rng.uniform_index(4));
    const auto base = schedule(c, n, cfg).scheduled;
    const double scale = std::pow(2.0, static_cast<double>(rng.uniform_index(8)) - 3);
    SystemConfig scaled = cfg;
    scaled.tradeoff_V *= scale;
    for (auto& x : c) x.queue *= scale;
    EXPECT_EQ(schedule(c, n, scaled).scheduled, base);
  }
}

TEST(RandomScheduleTest, UniformSubsetOfFeasible) {
  const std::vector<int> feasible = {2, 4, 6, 8};
  std::vector<int> hits(10, 0);
  Rng rng = rng_for(4, StreamPurpose::kRandomScheduler);
  constexpr int kTrials = 40000;
  for (int i = 0; i < kTrials; ++i) {
    const auto s = random_schedule(feasible, 2, rng);
    ASSERT_EQ(s.size(), 2u);
    ASSERT_LT(s[0], s[1]);
    for (int id : s) ++hits[static_cast<std::size_t>(id)];
  }
  for (int id : feasible) EXPECT_NEAR(hits[static_cast<std::size_t>(id)] / double{kTrials}, 0.5, 0.01);
  EXPECT_EQ(random_schedule(feasible, 9, rng), feasible);
}

TEST(GainThresholdTest, WorkedSingleDeviceExample) {
  const SystemConfig cfg;
  const double t_cmp = cfg.round_latency - 3.58;
  const double th = gain_threshold(t_cmp, 1.0, 1, cfg);
  EXPECT_NEAR(th, 6.455595210641554e-08, 1e-20);
  const std::vector<TrainedDevice> one = {{0, 1.0, 1.0, t_cmp}};
  EXPECT_TRUE(infeasible_after_training(one, cfg).empty());
}

TEST(InfeasibleTest, HugeGainsPassAndZeroGainFails) {
  const SystemConfig cfg;
  std::vector<TrainedDevice> set = {{0, 1e6, 1.0, 0.5}, {1, 1e6, 0.5, 1.0}, {2, 1e6, 1.9, 2.0}};
  EXPECT_TRUE(infeasible_after_training(set, cfg).empty());
  set[1].gain_sq = 0.0;
  EXPECT_EQ(infeasible_after_training(set, cfg), (std::vector<int>{1}));
}

TEST(PruneTest, NothingToPrune) {
  const SystemConfig cfg;
  const std::vector<TrainedDevice> set = {{3, 1.0, 1.0, 0.5}, {7, 0.8, 0.9, 0.4}};
  const auto r = prune(set, cfg);
  EXPECT_EQ(r.kept, (std::vector<int>{3, 7}));
  EXPECT_TRUE(r.removed.empty());
}

TEST(PruneTest, RemovesOnlyTheDeadLink) {
  const SystemConfig cfg;
  const std::vector<TrainedDevice> set = {
      {0, 1.2, 1.0, 0.5}, {1, 0.0, 1.0, 0.5}, {2, 0.7, 0.6, 1.5}, {3, 2.0, 1.8, 0.3}};
  const auto r = prune(set, cfg);
  EXPECT_EQ(r.kept, (std::vector<int>{0, 2, 3}));
  ASSERT_EQ(r.removed.size(), 1u);
  EXPECT_EQ(r.removed[0].id, 1);
  EXPECT_EQ(r.removed[0].set_size, 4);
  // Survivors are feasible at the shrunken size.
  std::vector<TrainedDevice> survivors = {set[0], set[2], set[3]};
  EXPECT_TRUE(infeasible_after_training(survivors, cfg).empty());
}

TEST(PruneTest, AllDeadLinksRemovedInRatioThenIdOrder) {
  const SystemConfig cfg;
  const std::vector<TrainedDevice> set = {{4, 0.0, 1.0, 0.5}, {2, 0.0, 0.7, 0.5}, {9, 0.0, 1.3, 0.5}};
  const auto r = prune(set, cfg);
  EXPECT_TRUE(r.kept.empty());
  ASSERT_EQ(r.removed.size(), 3u);
  EXPECT_EQ(r.removed[0].id, 2);
  EXPECT_EQ(r.removed[1].id, 4);
  EXPECT_EQ(r.removed[2].id, 9);
}

TEST(PruneTest, DropsWeakestRatioAmongInfeasible) {
  const SystemConfig cfg;
  // Device 1 has the smaller |g|^2 but a smaller beta too, so device 0 has
  // the smaller ratio.
  const std::vector<TrainedDevice> set = {{0, 1e-9, 1.0, 0.5}, {1, 5e-10, 0.1, 0.5}};
  const auto r = prune(set, cfg);
  ASSERT_FALSE(r.removed.empty());
  EXPECT_EQ(r.removed[0].id, 0);
}

TEST(PruneTest, SurvivorsMeetDeadlineWithRealisedRate) {
  const SystemConfig cfg;
  Rng rng = rng_for(5, StreamPurpose::kTest);
  int checked = 0;
  for (int trial = 0; trial < 5000; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_index(8));
    std::vector<TrainedDevice> set;
    for (int i = 0; i < n; ++i) {
      const double beta = db_to_linear(rng.uniform(-5.0, 3.0));
      const double f = rng.uniform(0.11e9, 1.52e9);
      // Heavy-tailed small gains so pruning actually triggers.
      const double g = beta * rng.exponential() * std::pow(10.0, -rng.uniform(0.0, 8.0));
      set.push_back({i, g, beta, compute_time(f, cfg)});
    }
    const auto r = prune(set, cfg);
    EXPECT_LE(r.removed.size(), set.size());
    const int kept = static_cast<int>(r.kept.size());
    for (int id : r.kept) {
      const auto& d = set[static_cast<std::size_t>(id)];
      EXPECT_LE(oracle::realised_latency(d.t_cmp, d.gain_sq, d.beta, kept, cfg),
                cfg.round_latency);
      ++checked;
    }
  }
  EXPECT_GT(checked, 1000);
}

}  // namespace
}  // namespace fedsched
