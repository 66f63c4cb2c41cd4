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

#include "fedsched/scheduler.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace fedsched {
namespace {

// log2(1 + n * P0 / (B * N0)).
double spectral_efficiency(int n, const SystemConfig& cfg) {
  return std::log2(1.0 + n * cfg.eff_rx_power_P0 /
                             (cfg.bandwidth * cfg.noise_density));
}

}  // namespace

double queue_update(double queue, bool scheduled, double energy,
                    double avg_energy) {
  return std::max(queue + (scheduled ? energy : 0.0) - avg_energy, 0.0);
}

bool meets_latency_budget(double cpu_freq, int n_target,
                          const SystemConfig& cfg) {
  const double t_cmp = cfg.cycles_c / cpu_freq;
  const double t_tr = cfg.update_bits * n_target /
                      (cfg.rate_margin * cfg.bandwidth *
                       spectral_efficiency(n_target, cfg));
  return t_cmp + t_tr <= cfg.round_latency;
}

std::vector<int> feasible_set(std::span<const double> cpu_freq, int n_target,
                              const SystemConfig& cfg) {
  std::vector<int> out;
  for (std::size_t k = 0; k < cpu_freq.size(); ++k) {
    if (meets_latency_budget(cpu_freq[k], n_target, cfg)) {
      out.push_back(static_cast<int>(k));
    }
  }
  return out;
}

double per_device_score(double queue, double cpu_freq, double importance,
                        double beta, int n, const SystemConfig& cfg) {
  const double e_cmp = cfg.power_coeff * cfg.cycles_c * cpu_freq * cpu_freq;
  const double tx_term =
      queue * cfg.update_bits * n * cfg.eff_rx_power_P0 /
      (cfg.rate_margin * cfg.bandwidth * beta * spectral_efficiency(n, cfg));
  return queue * e_cmp - cfg.tradeoff_V * importance + tx_term;
}

SchedulingDecision schedule(std::span<const Candidate> feasible, int n_target,
                            const SystemConfig& cfg) {
  SchedulingDecision d;
  d.feasible.reserve(feasible.size());
  d.scores.reserve(feasible.size());
  for (const auto& c : feasible) {
    d.feasible.push_back(c.id);
    d.scores.push_back(per_device_score(c.queue, c.cpu_freq, c.importance,
                                        c.beta, n_target, cfg));
  }

  const std::size_t m = std::min(static_cast<std::size_t>(std::max(n_target, 0)),
                                 feasible.size());
  std::vector<std::size_t> order(feasible.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m),
                    order.end(), [&](std::size_t a, std::size_t b) {
                      if (d.scores[a] != d.scores[b]) return d.scores[a] < d.scores[b];
                      return d.feasible[a] < d.feasible[b];
                    });

  for (std::size_t i = 0; i < m; ++i) {
    if (cfg.allow_shrink && d.scores[order[i]] > 0.0) break;
    d.scheduled.push_back(d.feasible[order[i]]);
  }
  std::sort(d.scheduled.begin(), d.scheduled.end());
  return d;
}

std::vector<int> random_schedule(std::span<const int> feasible, int n_target,
                                 Rng& rng) {
  std::vector<int> pool(feasible.begin(), feasible.end());
  const std::size_t m =
      std::min(static_cast<std::size_t>(std::max(n_target, 0)), pool.size());
  // Partial Fisher-Yates: the first m slots become a uniform m-subset.
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + rng.uniform_index(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(m);
  std::sort(pool.begin(), pool.end());
  return pool;
}

double gain_threshold(double t_cmp, double beta, int n,
                      const SystemConfig& cfg) {
  const double remaining = cfg.round_latency - t_cmp;
  if (!(remaining > 0.0)) return std::numeric_limits<double>::infinity();
  const double c1 =
      std::exp2(cfg.update_bits * n / (cfg.bandwidth * remaining)) - 1.0;
  return 3.0 * c1 * beta * cfg.bandwidth * cfg.noise_density /
         (n * cfg.eff_rx_power_P0);
}

std::vector<int> infeasible_after_training(std::span<const TrainedDevice> set,
                                           const SystemConfig& cfg) {
  std::vector<int> out;
  const int n = static_cast<int>(set.size());
  for (const auto& dev : set) {
    if (dev.gain_sq < gain_threshold(dev.t_cmp, dev.beta, n, cfg)) {
      out.push_back(dev.id);
    }
  }
  return out;
}

PruneResult prune(std::span<const TrainedDevice> set, const SystemConfig& cfg) {
  std::vector<TrainedDevice> current(set.begin(), set.end());
  PruneResult result;
  while (!current.empty()) {
    const int n = static_cast<int>(current.size());
    std::size_t worst = current.size();
    double worst_threshold = 0.0;
    for (std::size_t i = 0; i < current.size(); ++i) {
      const auto& dev = current[i];
      const double threshold = gain_threshold(dev.t_cmp, dev.beta, n, cfg);
      if (!(dev.gain_sq < threshold)) continue;
      if (worst == current.size()) {
        worst = i;
        worst_threshold = threshold;
        continue;
      }
      const double ratio = dev.gain_sq / dev.beta;
      const double best_ratio = current[worst].gain_sq / current[worst].beta;
      if (ratio < best_ratio ||
          (ratio == best_ratio && dev.id < current[worst].id)) {
        worst = i;
        worst_threshold = threshold;
      }
    }
    if (worst == current.size()) break;
    result.removed.push_back(
        {current[worst].id, current[worst].gain_sq, worst_threshold, n});
    current.erase(current.begin() + static_cast<std::ptrdiff_t>(worst));
  }
  for (const auto& dev : current) result.kept.push_back(dev.id);
  std::sort(result.kept.begin(), result.kept.end());
  return result;
}

}  // namespace fedsched
