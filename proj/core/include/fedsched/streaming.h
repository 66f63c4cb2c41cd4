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

#ifndef FEDSCHED_STREAMING_H_
#define FEDSCHED_STREAMING_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "fedsched/config.h"
#include "fedsched/rng.h"

namespace fedsched {

struct Sample {
  std::vector<float> features;
  int label = 0;
};

struct TimedSample {
  Sample sample;
  double arrival_time = 0.0;  // seconds on the simulation clock
};

// The samples a device will ever see, ordered by arrival time. Queries are
// read-only views into the ordered list; the cursor is an optional
// consumption marker that only moves forward.
class DeviceStream {
 public:
  DeviceStream() = default;
  // Throws std::invalid_argument if arrival times are decreasing.
  explicit DeviceStream(std::vector<TimedSample> samples);

  // Samples with arrival time in (t_lo, t_hi]. Empty when t_lo >= t_hi.
  std::span<const Sample> arrived_between(double t_lo, double t_hi) const;
  // Everything arrived by t: arrived_between(0, t).
  std::span<const Sample> available_at(double t) const;

  std::span<const Sample> all() const { return samples_; }
  std::span<const double> arrival_times() const { return times_; }
  std::size_t size() const { return samples_.size(); }

  std::size_t cursor() const { return cursor_; }
  // Moves the cursor past every sample that arrived by t. Never moves back.
  void advance_to(double t);

 private:
  std::size_t count_until(double t) const;

  std::vector<Sample> samples_;
  std::vector<double> times_;
  std::size_t cursor_ = 0;
};

// Label histogram of a sample range; labels outside [0, num_classes) are
// ignored.
std::vector<double> label_histogram(std::span<const Sample> samples,
                                    int num_classes);

// Splits a corpus into num_devices equally sized, disjoint lists.
//   iid: shuffle, truncate to a multiple of num_devices, deal out.
//   shards(m): shuffle, group by label (labels visited in random order),
//     truncate to a multiple of num_devices, and give each device one
//     contiguous run of the grouped sequence; device ids are permuted so
//     neighbouring runs land on random devices. Throws
//     InfeasiblePartitionError when a run would span more than m labels.
std::vector<std::vector<Sample>> partition(std::span<const Sample> corpus,
                                           const PartitionModel& model,
                                           int num_devices, Rng& rng);

// Orders a device's samples by label, cycling upward from a randomly picked
// starting label present on the device (stable within a label), draws one
// timestamp per sample from the arrival model, sorts the timestamps and pairs
// them positionally with the ordered samples.
// Timestamps always lie in (0, total_time].
//   uniform: U(0, total_time).
//   truncated_normal: N(mu, sigma^2) with mu ~ U(0, total_time), truncated to
//     the clipping range.
DeviceStream assign_arrivals(std::vector<Sample> device_samples,
                             ArrivalModel model, double total_time,
                             double sigma, Rng& rng);

// Reads an IDX image file (magic 0x00000803) and its label file
// (0x00000801). Pixels are scaled to [0, 1]. Throws IoError / FormatError.
std::vector<Sample> load_idx_corpus(const std::filesystem::path& images_path,
                                    const std::filesystem::path& labels_path);

// Class-conditional Gaussian blobs with unit noise. Class c has mean
// (separation / sqrt(2)) * e_c, so every pair of means is exactly
// `separation` apart; requires feature_dim >= num_classes. Labels are
// balanced (counts differ by at most one) and shuffled.
std::vector<Sample> synth_corpus(int num_classes, int n, int feature_dim,
                                 double separation, Rng& rng);

}  // namespace fedsched

#endif  // FEDSCHED_STREAMING_H_
