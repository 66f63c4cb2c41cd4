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

#include "fedsched/summary.h"

#include <algorithm>
#include <stdexcept>

namespace fedsched {

RunSummary summarize(std::span<const RoundLog> logs, int window) {
  if (logs.empty()) throw std::invalid_argument("summarize: no rounds");
  RunSummary s;
  s.rounds = static_cast<int>(logs.size());
  const std::size_t k = logs.front().devices.size();
  s.num_devices = static_cast<int>(k);
  s.max_queue_per_device.assign(k, 0.0);
  s.final_queue_per_device.assign(k, 0.0);
  s.schedule_counts.assign(k, 0);
  s.transmit_counts.assign(k, 0);

  double energy = 0.0;
  std::vector<double> accuracies;
  for (const auto& log : logs) {
    for (const auto& d : log.devices) {
      const auto i = static_cast<std::size_t>(d.device);
      energy += d.energy;
      s.max_queue_per_device[i] =
          std::max(s.max_queue_per_device[i], d.queue_after);
      s.final_queue_per_device[i] = d.queue_after;
      s.schedule_counts[i] += d.scheduled ? 1 : 0;
      s.transmit_counts[i] += d.transmitted ? 1 : 0;
    }
    if (log.evaluated) {
      accuracies.push_back(log.test_accuracy);
      s.final_accuracy = log.test_accuracy;
      s.final_loss = log.test_loss;
    }
  }
  s.mean_energy_per_device =
      k == 0 ? 0.0 : energy / (static_cast<double>(k) * s.rounds);
  if (!s.max_queue_per_device.empty()) {
    s.max_queue = *std::max_element(s.max_queue_per_device.begin(),
                                    s.max_queue_per_device.end());
  }
  if (!accuracies.empty()) {
    const std::size_t w = std::min(
        accuracies.size(), static_cast<std::size_t>(std::max(window, 1)));
    double sum = 0.0;
    for (std::size_t i = accuracies.size() - w; i < accuracies.size(); ++i) {
      sum += accuracies[i];
    }
    s.rolling_accuracy = sum / static_cast<double>(w);
  }
  return s;
}

}  // namespace fedsched
