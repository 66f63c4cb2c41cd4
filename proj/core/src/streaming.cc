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

#include "fedsched/streaming.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fedsched/errors.h"

namespace fedsched {

DeviceStream::DeviceStream(std::vector<TimedSample> samples) {
  samples_.reserve(samples.size());
  times_.reserve(samples.size());
  for (auto& s : samples) {
    if (!times_.empty() && s.arrival_time < times_.back()) {
      throw std::invalid_argument("DeviceStream: arrival times must be sorted");
    }
    times_.push_back(s.arrival_time);
    samples_.push_back(std::move(s.sample));
  }
}

std::size_t DeviceStream::count_until(double t) const {
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  return static_cast<std::size_t>(it - times_.begin());
}

std::span<const Sample> DeviceStream::arrived_between(double t_lo,
                                                      double t_hi) const {
  const std::size_t begin = count_until(t_lo);
  const std::size_t end = std::max(begin, count_until(t_hi));
  return std::span<const Sample>(samples_).subspan(begin, end - begin);
}

std::span<const Sample> DeviceStream::available_at(double t) const {
  return arrived_between(0.0, t);
}

void DeviceStream::advance_to(double t) {
  cursor_ = std::max(cursor_, count_until(t));
}

std::vector<double> label_histogram(std::span<const Sample> samples,
                                    int num_classes) {
  std::vector<double> hist(static_cast<std::size_t>(num_classes), 0.0);
  for (const auto& s : samples) {
    if (s.label >= 0 && s.label < num_classes) {
      hist[static_cast<std::size_t>(s.label)] += 1.0;
    }
  }
  return hist;
}

std::vector<std::vector<Sample>> partition(std::span<const Sample> corpus,
                                           const PartitionModel& model,
                                           int num_devices, Rng& rng) {
  if (num_devices < 1) {
    throw std::invalid_argument("partition: num_devices must be >= 1");
  }
  const auto k = static_cast<std::size_t>(num_devices);

  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);

  if (model.kind == PartitionModel::Kind::kShards) {
    int max_label = -1;
    for (const auto& s : corpus) max_label = std::max(max_label, s.label);
    std::vector<int> label_rank(static_cast<std::size_t>(max_label + 1));
    std::iota(label_rank.begin(), label_rank.end(), 0);
    std::shuffle(label_rank.begin(), label_rank.end(), rng);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return label_rank[corpus[a].label] <
                              label_rank[corpus[b].label];
                     });
  }

  const std::size_t per_device = corpus.size() / k;
  std::vector<std::size_t> device_of_run(k);
  std::iota(device_of_run.begin(), device_of_run.end(), std::size_t{0});
  if (model.kind == PartitionModel::Kind::kShards) {
    std::shuffle(device_of_run.begin(), device_of_run.end(), rng);
  }

  std::vector<std::vector<Sample>> out(k);
  for (std::size_t run = 0; run < k; ++run) {
    auto& dst = out[device_of_run[run]];
    dst.reserve(per_device);
    for (std::size_t i = 0; i < per_device; ++i) {
      dst.push_back(corpus[order[run * per_device + i]]);
    }
  }

  if (model.kind == PartitionModel::Kind::kShards) {
    for (std::size_t d = 0; d < k; ++d) {
      std::vector<int> labels;
      for (const auto& s : out[d]) labels.push_back(s.label);
      std::sort(labels.begin(), labels.end());
      const auto distinct = std::unique(labels.begin(), labels.end()) -
                            labels.begin();
      if (distinct > model.max_labels_per_device) {
        throw InfeasiblePartitionError(
            "shards(" + std::to_string(model.max_labels_per_device) +
            "): device " + std::to_string(d) + " would hold " +
            std::to_string(distinct) +
            " labels; too few samples per label for this many devices");
      }
    }
  }
  return out;
}

DeviceStream assign_arrivals(std::vector<Sample> device_samples,
                             ArrivalModel model, double total_time,
                             double sigma, Rng& rng) {
  if (device_samples.empty()) {
    throw std::invalid_argument("assign_arrivals: empty sample list");
  }
  const int start =
      device_samples[rng.uniform_index(device_samples.size())].label;
  const auto cyclic_rank = [start](int label) {
    return label >= start ? static_cast<long>(label) - start
                          : static_cast<long>(label) - start + (1L << 40);
  };
  std::stable_sort(device_samples.begin(), device_samples.end(),
                   [&](const Sample& a, const Sample& b) {
                     return cyclic_rank(a.label) < cyclic_rank(b.label);
                   });

  std::vector<double> times;
  times.reserve(device_samples.size());
  if (model == ArrivalModel::kUniform) {
    for (std::size_t i = 0; i < device_samples.size(); ++i) {
      times.push_back(total_time * (1.0 - rng.uniform()));
    }
  } else {
    const double mean = rng.uniform(0.0, total_time);
    while (times.size() < device_samples.size()) {
      const double t = mean + sigma * rng.normal();
      if (t > 0.0 && t <= total_time) times.push_back(t);
    }
  }
  std::sort(times.begin(), times.end());

  std::vector<TimedSample> timed;
  timed.reserve(device_samples.size());
  for (std::size_t i = 0; i < device_samples.size(); ++i) {
    timed.push_back({std::move(device_samples[i]), times[i]});
  }
  return DeviceStream(std::move(timed));
}

std::vector<Sample> synth_corpus(int num_classes, int n, int feature_dim,
                                 double separation, Rng& rng) {
  if (num_classes < 1 || n < 1 || feature_dim < 1) {
    throw std::invalid_argument("synth_corpus: sizes must be >= 1");
  }
  if (feature_dim < num_classes) {
    throw std::invalid_argument(
        "synth_corpus: feature_dim must be >= num_classes");
  }
  const double offset = separation / std::sqrt(2.0);
  std::vector<Sample> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Sample s;
    s.label = i % num_classes;
    s.features.resize(static_cast<std::size_t>(feature_dim));
    for (auto& x : s.features) x = static_cast<float>(rng.normal());
    s.features[static_cast<std::size_t>(s.label)] += static_cast<float>(offset);
    out.push_back(std::move(s));
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

}  // namespace fedsched
