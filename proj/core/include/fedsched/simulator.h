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

#ifndef FEDSCHED_SIMULATOR_H_
#define FEDSCHED_SIMULATOR_H_

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "fedsched/config.h"
#include "fedsched/importance.h"
#include "fedsched/learner.h"
#include "fedsched/scheduler.h"
#include "fedsched/streaming.h"

namespace fedsched {

// Selection rule of a run. Everything else (feasibility filter, pruning,
// energy accounting) is shared, so runs differ only in who gets picked.
struct SchedulerKind {
  enum class Rule { kProposed, kRandomFeasible };
  Rule rule = Rule::kProposed;
  ImportanceVariant variant = ImportanceVariant::kCombined;

  static SchedulerKind Proposed(
      ImportanceVariant v = ImportanceVariant::kCombined) {
    return {Rule::kProposed, v};
  }
  static SchedulerKind RandomFeasible() {
    return {Rule::kRandomFeasible, ImportanceVariant::kCombined};
  }

  // "proposed", "amount_only", "distribution_only" or "random".
  std::string name() const;

  friend bool operator==(const SchedulerKind&, const SchedulerKind&) = default;
};

// Inverse of SchedulerKind::name(); also accepts "combined" and
// "random_feasible". Throws std::invalid_argument.
SchedulerKind parse_scheduler(std::string_view name);

struct Corpus {
  std::vector<Sample> train;
  std::vector<Sample> test;
  int num_classes = 0;
  int feature_dim = 0;
};

// Synthetic blobs or IDX files, as configured.
Corpus load_corpus(const SystemConfig& cfg);

// The static world of a run: per-device streams, large-scale fading and the
// held-out test split.
struct Environment {
  std::vector<DeviceStream> streams;
  std::vector<double> beta;  // linear
  std::vector<Sample> test_set;
  int num_classes = 0;
  int feature_dim = 0;
};

Environment build_environment(const SystemConfig& cfg, const Corpus& corpus);

struct DeviceRoundRecord {
  int device = 0;
  bool feasible = false;
  bool scheduled = false;
  bool transmitted = false;
  std::size_t data_available = 0;  // |S_k(t)|
  std::size_t new_data = 0;        // |B_k(t)|
  double importance = 0.0;
  double amount_term = 0.0;
  double distribution_term = 0.0;
  double score = 0.0;
  double queue_before = 0.0;
  double queue_after = 0.0;
  double cpu_freq = 0.0;
  double gain_sq = 0.0;
  double t_cmp = 0.0;
  double t_tr = 0.0;
  double e_cmp = 0.0;
  double e_tr = 0.0;
  double energy = 0.0;
};

struct RoundLog {
  int round = 0;
  std::vector<int> feasible;     // Pi_f
  std::vector<int> scheduled;    // Pi*
  std::vector<int> transmitted;  // Pi-bar
  std::vector<Removal> removed;
  std::vector<DeviceRoundRecord> devices;  // one per device, by id

  bool evaluated = false;
  double test_loss = 0.0;
  double test_accuracy = 0.0;
  // Size-weighted loss over all device data available this round.
  double train_loss = 0.0;
  double round_mean_energy = 0.0;       // sum_k E_k / K
  double cumulative_mean_energy = 0.0;  // running mean of round_mean_energy
  double max_queue = 0.0;               // max_k Q_k(t + 1)
};

// Drives rounds one at a time. Holds the only mutable state of a run: the
// global model, virtual queues and last-utilised rounds.
class Simulator {
 public:
  Simulator(SystemConfig cfg, SchedulerKind scheduler,
            std::shared_ptr<const Environment> env);

  const SystemConfig& config() const { return cfg_; }
  const GlobalModel& model() const { return model_; }
  const std::vector<double>& queues() const { return queues_; }
  int next_round() const { return round_ + 1; }
  bool done() const { return round_ >= cfg_.total_rounds; }

  RoundLog step();

 private:
  ImportanceInputs importance_inputs(int t, const std::vector<int>& feasible,
                                     std::vector<std::size_t>& new_counts) const;

  SystemConfig cfg_;
  SchedulerKind scheduler_;
  std::shared_ptr<const Environment> env_;
  GlobalModel model_;
  std::vector<double> queues_;
  std::vector<int> last_utilized_;  // 0 = never
  std::vector<std::vector<double>> utilized_hist_;
  double energy_sum_ = 0.0;
  int round_ = 0;
};

using RoundSink = std::function<void(const RoundLog&)>;

// Validates cfg, builds the environment and runs every round. on_round sees
// each log as soon as its round completes.
std::vector<RoundLog> run(const SystemConfig& cfg, SchedulerKind scheduler,
                          const RoundSink& on_round = {});
std::vector<RoundLog> run(const SystemConfig& cfg, SchedulerKind scheduler,
                          const Corpus& corpus, const RoundSink& on_round = {});

}  // namespace fedsched

#endif  // FEDSCHED_SIMULATOR_H_
