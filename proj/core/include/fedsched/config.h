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

#ifndef FEDSCHED_CONFIG_H_
#define FEDSCHED_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fedsched {

// Unit conversions. Power levels enter the system in dBm/dB at the config
// boundary and are linear everywhere else.
double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);
double db_to_linear(double db);
double linear_to_db(double linear);

struct Range {
  double lo = 0.0;
  double hi = 0.0;

  friend bool operator==(const Range&, const Range&) = default;
};

enum class ArrivalModel { kTruncatedNormal, kUniform };

struct PartitionModel {
  enum class Kind { kIid, kShards };
  Kind kind = Kind::kIid;
  // Upper bound on distinct labels per device; only meaningful for kShards.
  int max_labels_per_device = 0;

  static PartitionModel Iid() { return {}; }
  static PartitionModel Shards(int m) { return {Kind::kShards, m}; }

  friend bool operator==(const PartitionModel&, const PartitionModel&) = default;
};

// Which samples count as "newly arrived" when scoring importance.
enum class NewDataWindow {
  kSinceLastScheduled,  // (t_hat * T_rd, t * T_rd]
  kPerRound,            // ((t - 1) * T_rd, t * T_rd]
};

enum class LearnerArch { kSoftmax, kMlp };

enum class DatasetSource { kSynthetic, kIdx };

struct SgdConfig {
  int local_steps = 5;
  int batch_size = 32;
  double learning_rate = 0.05;

  friend bool operator==(const SgdConfig&, const SgdConfig&) = default;
};

struct DatasetConfig {
  DatasetSource source = DatasetSource::kSynthetic;
  int synth_classes = 10;
  int synth_train_size = 5000;
  int synth_test_size = 2000;
  int synth_feature_dim = 20;
  // Distance between neighbouring class means, in units of the noise std.
  double synth_separation = 2.5;
  std::string idx_train_images;
  std::string idx_train_labels;
  std::string idx_test_images;
  std::string idx_test_labels;

  friend bool operator==(const DatasetConfig&, const DatasetConfig&) = default;
};

// Every physical, algorithmic and experiment constant of a run. Defaults
// are the reference system parameters (K = 40 devices, d = 21840).
struct SystemConfig {
  int num_devices = 40;
  int model_dim = 21840;
  double bandwidth = 20e6;               // Hz
  double noise_density = 1e-13;          // W, multiplies B in the SNR
  double eff_rx_power_P0 = 0.63095734448019325;  // W (28 dBm)
  double power_coeff = 1e-27;
  double cycles_c = 600.0 * 32.0 * 21840.0;
  double update_bits = 32.0 * 21840.0;
  double round_latency = 4.0;  // s
  double avg_energy = 5e-4;    // J per device per round
  double tradeoff_V = 0.05;
  double rate_margin = 0.8;
  int sched_cardinality = 2;
  Range cpu_freq_range{0.02e9, 1.52e9};  // Hz
  Range fading_dB_range{-5.0, 3.0};
  ArrivalModel arrival_model = ArrivalModel::kTruncatedNormal;
  PartitionModel partition_model = PartitionModel::Iid();
  int total_rounds = 300;
  std::uint64_t seed = 1;

  // Truncated-normal arrival std as a fraction of the total run time.
  double arrival_sigma_frac = 0.1;
  NewDataWindow new_data_window = NewDataWindow::kSinceLastScheduled;
  // Let the scheduler drop devices whose score is positive instead of
  // always filling sched_cardinality.
  bool allow_shrink = false;

  SgdConfig sgd;
  LearnerArch learner = LearnerArch::kSoftmax;
  int hidden_width = 32;
  // Test-set evaluation period in rounds; the final round is always
  // evaluated.
  int eval_every = 10;
  DatasetConfig data;

  // Whole-run wall-clock horizon T_tot = T * T_rd.
  double total_time() const { return total_rounds * round_latency; }

  friend bool operator==(const SystemConfig&, const SystemConfig&) = default;
};

// Throws ConfigError naming the first violated field.
void validate(const SystemConfig& cfg);

// Sets one key from its textual form. Setting model_dim re-derives
// cycles_c = 600 * 32 * d and update_bits = 32 * d; explicit values for
// those keys applied afterwards win. eff_rx_power_P0 is read in dBm and
// fading_dB_range in dB; ranges are written "lo,hi".
void apply_override(SystemConfig& cfg, std::string_view key,
                    std::string_view value);

// Parses "key = value" lines ('#' starts a comment) on top of the
// defaults. model_dim is applied before every other key so derived
// quantities can still be overridden in the same file.
SystemConfig parse_config(std::string_view text);
SystemConfig load_config_file(const std::filesystem::path& path);

// Canonical key/value listing of every field, in declaration order, in the
// same textual form apply_override accepts.
std::vector<std::pair<std::string, std::string>> to_key_values(
    const SystemConfig& cfg);
std::string to_config_text(const SystemConfig& cfg);

std::string to_string(ArrivalModel m);
std::string to_string(const PartitionModel& m);
std::string to_string(NewDataWindow w);
std::string to_string(LearnerArch a);
std::string to_string(DatasetSource s);

}  // namespace fedsched

#endif  // FEDSCHED_CONFIG_H_
