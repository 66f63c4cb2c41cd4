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

#ifndef FEDSCHED_SUMMARY_H_
#define FEDSCHED_SUMMARY_H_

#include <span>
#include <vector>

#include "fedsched/simulator.h"

namespace fedsched {

struct RunSummary {
  int rounds = 0;
  int num_devices = 0;
  // Sum of all device energy over rounds and devices, divided by K * T.
  double mean_energy_per_device = 0.0;
  double final_accuracy = 0.0;
  double final_loss = 0.0;
  // Mean test accuracy over the last `window` evaluated rounds.
  double rolling_accuracy = 0.0;
  double max_queue = 0.0;
  std::vector<double> max_queue_per_device;
  std::vector<double> final_queue_per_device;
  std::vector<int> schedule_counts;
  std::vector<int> transmit_counts;
};

// Throws std::invalid_argument on an empty log.
RunSummary summarize(std::span<const RoundLog> logs, int window);

}  // namespace fedsched

#endif  // FEDSCHED_SUMMARY_H_
