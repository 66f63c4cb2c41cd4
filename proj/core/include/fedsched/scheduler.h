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

#ifndef FEDSCHED_SCHEDULER_H_
#define FEDSCHED_SCHEDULER_H_

#include <span>
#include <vector>

#include "fedsched/config.h"
#include "fedsched/rng.h"

namespace fedsched {

// Virtual energy queue step: max(Q + s * E - E_avg, 0).
double queue_update(double queue, bool scheduled, double energy,
                    double avg_energy);

// Pre-training latency test for one device, with the transmission time taken
// from the surrogate rate at |Pi| = n_target:
//   c / f + S * n / (gamma * B * log2(1 + n * P0 / (B * N0))) <= T_rd.
bool meets_latency_budget(double cpu_freq, int n_target,
                          const SystemConfig& cfg);

// Ids (indices into cpu_freq) of every device passing meets_latency_budget.
std::vector<int> feasible_set(std::span<const double> cpu_freq, int n_target,
                              const SystemConfig& cfg);

// One device's summand of the drift-plus-penalty objective:
//   Q * lambda * c * f^2 - V * I
//     + Q * S * n * P0 / (gamma * B * beta * log2(1 + n * P0 / (B * N0))).
// The last term is Q times the expected transmit energy (P0 / beta) * S / R~.
double per_device_score(double queue, double cpu_freq, double importance,
                        double beta, int n, const SystemConfig& cfg);

struct Candidate {
  int id = 0;
  double queue = 0.0;
  double cpu_freq = 0.0;
  double importance = 0.0;
  double beta = 1.0;
};

struct SchedulingDecision {
  std::vector<int> feasible;   // ids, as passed in
  std::vector<double> scores;  // aligned with feasible
  std::vector<int> scheduled;  // ascending ids
};

// Picks min(n_target, |feasible|) candidates with the smallest score
// (computed at n = n_target), ties to the lower id. With cfg.allow_shrink,
// candidates with a positive score are left out instead of filling the
// cardinality.
SchedulingDecision schedule(std::span<const Candidate> feasible, int n_target,
                            const SystemConfig& cfg);

// Uniformly random min(n_target, |feasible|)-subset; ascending ids.
std::vector<int> random_schedule(std::span<const int> feasible, int n_target,
                                 Rng& rng);

struct TrainedDevice {
  int id = 0;
  double gain_sq = 0.0;
  double beta = 1.0;
  double t_cmp = 0.0;
};

// Smallest |g|^2 that lets a device of a set of size n finish uploading in
// the time left after computing, with a 3x margin:
//   3 * C1 * beta * B * N0 / (n * P0),  C1 = 2^(S n / (B (T_rd - t_cmp))) - 1.
// Infinite when no time is left.
double gain_threshold(double t_cmp, double beta, int n,
                      const SystemConfig& cfg);

// Ids of the devices whose realised gain is below their threshold, with
// n = |set|. Output preserves input order.
std::vector<int> infeasible_after_training(std::span<const TrainedDevice> set,
                                           const SystemConfig& cfg);

struct Removal {
  int id = 0;
  double gain_sq = 0.0;
  double threshold = 0.0;  // threshold in force when the device was dropped
  int set_size = 0;        // |set| when the device was dropped
};

struct PruneResult {
  std::vector<int> kept;  // ascending ids
  std::vector<Removal> removed;  // in removal order
};

// Repeatedly drops, among the currently infeasible devices, the one with the
// smallest |g|^2 / beta (ties to the lower id), re-evaluating with the
// shrunken set size, until no device is infeasible.
PruneResult prune(std::span<const TrainedDevice> set, const SystemConfig& cfg);

}  // namespace fedsched

#endif  // FEDSCHED_SCHEDULER_H_
