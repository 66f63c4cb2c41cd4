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

#include "fedsched/config.h"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "fedsched/errors.h"
#include "fedsched/text.h"

namespace fedsched {

double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) / 1000.0; }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts * 1000.0); }

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

std::string to_string(ArrivalModel m) {
  return m == ArrivalModel::kUniform ? "uniform" : "truncated_normal";
}

std::string to_string(const PartitionModel& m) {
  if (m.kind == PartitionModel::Kind::kIid) return "iid";
  return "shards:" + std::to_string(m.max_labels_per_device);
}

std::string to_string(NewDataWindow w) {
  return w == NewDataWindow::kPerRound ? "per_round" : "since_last_scheduled";
}

std::string to_string(LearnerArch a) {
  return a == LearnerArch::kMlp ? "mlp" : "softmax";
}

std::string to_string(DatasetSource s) {
  return s == DatasetSource::kIdx ? "idx" : "synthetic";
}

namespace {

void require(bool ok, const char* field, const char* reason) {
  if (!ok) throw ConfigError(field, reason);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

Range parse_range(std::string_view value) {
  const auto parts = split(value, ',');
  if (parts.size() != 2) {
    throw std::invalid_argument("expected 'lo,hi', got '" +
                                std::string(value) + "'");
  }
  return {parse_double(parts[0]), parse_double(parts[1])};
}

std::string format_range(const Range& r) {
  return format_double(r.lo) + "," + format_double(r.hi);
}

int parse_count(std::string_view value) {
  const auto v = parse_int(value);
  if (v < std::numeric_limits<int>::min() ||
      v > std::numeric_limits<int>::max()) {
    throw std::invalid_argument("integer out of range");
  }
  return static_cast<int>(v);
}

ArrivalModel parse_arrival(std::string_view v) {
  v = trim(v);
  if (v == "truncated_normal") return ArrivalModel::kTruncatedNormal;
  if (v == "uniform") return ArrivalModel::kUniform;
  throw std::invalid_argument("expected truncated_normal or uniform");
}

PartitionModel parse_partition(std::string_view v) {
  v = trim(v);
  if (v == "iid") return PartitionModel::Iid();
  // Accept both "shards:3" and "shards(3)".
  if (v.starts_with("shards")) {
    std::string_view rest = v.substr(6);
    if (rest.starts_with(':')) {
      rest.remove_prefix(1);
    } else if (rest.starts_with('(') && rest.ends_with(')')) {
      rest = rest.substr(1, rest.size() - 2);
    } else {
      rest = {};
    }
    if (!rest.empty()) return PartitionModel::Shards(parse_count(rest));
  }
  throw std::invalid_argument("expected iid or shards:<m>");
}

NewDataWindow parse_window(std::string_view v) {
  v = trim(v);
  if (v == "since_last_scheduled") return NewDataWindow::kSinceLastScheduled;
  if (v == "per_round") return NewDataWindow::kPerRound;
  throw std::invalid_argument("expected since_last_scheduled or per_round");
}

LearnerArch parse_arch(std::string_view v) {
  v = trim(v);
  if (v == "softmax") return LearnerArch::kSoftmax;
  if (v == "mlp") return LearnerArch::kMlp;
  throw std::invalid_argument("expected softmax or mlp");
}

DatasetSource parse_source(std::string_view v) {
  v = trim(v);
  if (v == "synthetic") return DatasetSource::kSynthetic;
  if (v == "idx") return DatasetSource::kIdx;
  throw std::invalid_argument("expected synthetic or idx");
}

struct Field {
  std::function<void(SystemConfig&, std::string_view)> set;
  std::function<std::string(const SystemConfig&)> get;
};

#define FEDSCHED_INT_FIELD(name, member)                                      \
  {                                                                           \
    name, {                                                                   \
      [](SystemConfig& c, std::string_view v) { c.member = parse_count(v); }, \
          [](const SystemConfig& c) { return std::to_string(c.member); }      \
    }                                                                         \
  }
#define FEDSCHED_REAL_FIELD(name, member)                                      \
  {                                                                            \
    name, {                                                                    \
      [](SystemConfig& c, std::string_view v) { c.member = parse_double(v); }, \
          [](const SystemConfig& c) { return format_double(c.member); }        \
    }                                                                          \
  }
#define FEDSCHED_STR_FIELD(name, member)                                  \
  {                                                                       \
    name, {                                                               \
      [](SystemConfig& c, std::string_view v) { c.member = trim(v); },    \
          [](const SystemConfig& c) { return std::string(c.member); }     \
    }                                                                     \
  }

// Declaration order defines the canonical listing order.
const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> kFields = {
      {"num_devices",
       {[](SystemConfig& c, std::string_view v) {
          c.num_devices = parse_count(v);
        },
        [](const SystemConfig& c) { return std::to_string(c.num_devices); }}},
      {"model_dim",
       {[](SystemConfig& c, std::string_view v) {
          c.model_dim = parse_count(v);
          c.cycles_c = 600.0 * 32.0 * c.model_dim;
          c.update_bits = 32.0 * c.model_dim;
        },
        [](const SystemConfig& c) { return std::to_string(c.model_dim); }}},
      FEDSCHED_REAL_FIELD("bandwidth", bandwidth),
      FEDSCHED_REAL_FIELD("noise_density", noise_density),
      {"eff_rx_power_P0",
       {[](SystemConfig& c, std::string_view v) {
          c.eff_rx_power_P0 = dbm_to_watts(parse_double(v));
        },
        [](const SystemConfig& c) {
          return format_double(watts_to_dbm(c.eff_rx_power_P0));
        }}},
      FEDSCHED_REAL_FIELD("power_coeff", power_coeff),
      FEDSCHED_REAL_FIELD("cycles_c", cycles_c),
      FEDSCHED_REAL_FIELD("update_bits", update_bits),
      FEDSCHED_REAL_FIELD("round_latency", round_latency),
      FEDSCHED_REAL_FIELD("avg_energy", avg_energy),
      FEDSCHED_REAL_FIELD("tradeoff_V", tradeoff_V),
      FEDSCHED_REAL_FIELD("rate_margin", rate_margin),
      FEDSCHED_INT_FIELD("sched_cardinality", sched_cardinality),
      {"cpu_freq_range",
       {[](SystemConfig& c, std::string_view v) {
          c.cpu_freq_range = parse_range(v);
        },
        [](const SystemConfig& c) { return format_range(c.cpu_freq_range); }}},
      {"fading_dB_range",
       {[](SystemConfig& c, std::string_view v) {
          c.fading_dB_range = parse_range(v);
        },
        [](const SystemConfig& c) { return format_range(c.fading_dB_range); }}},
      {"arrival_model",
       {[](SystemConfig& c, std::string_view v) {
          c.arrival_model = parse_arrival(v);
        },
        [](const SystemConfig& c) { return to_string(c.arrival_model); }}},
      {"partition_model",
       {[](SystemConfig& c, std::string_view v) {
          c.partition_model = parse_partition(v);
        },
        [](const SystemConfig& c) { return to_string(c.partition_model); }}},
      FEDSCHED_INT_FIELD("total_rounds", total_rounds),
      {"seed",
       {[](SystemConfig& c, std::string_view v) { c.seed = parse_uint(v); },
        [](const SystemConfig& c) { return std::to_string(c.seed); }}},
      FEDSCHED_REAL_FIELD("arrival_sigma_frac", arrival_sigma_frac),
      {"new_data_window",
       {[](SystemConfig& c, std::string_view v) {
          c.new_data_window = parse_window(v);
        },
        [](const SystemConfig& c) { return to_string(c.new_data_window); }}},
      {"allow_shrink",
       {[](SystemConfig& c, std::string_view v) {
          c.allow_shrink = parse_bool(v);
        },
        [](const SystemConfig& c) {
          return std::string(c.allow_shrink ? "true" : "false");
        }}},
      FEDSCHED_INT_FIELD("local_steps", sgd.local_steps),
      FEDSCHED_INT_FIELD("batch_size", sgd.batch_size),
      FEDSCHED_REAL_FIELD("learning_rate", sgd.learning_rate),
      {"learner",
       {[](SystemConfig& c, std::string_view v) { c.learner = parse_arch(v); },
        [](const SystemConfig& c) { return to_string(c.learner); }}},
      FEDSCHED_INT_FIELD("hidden_width", hidden_width),
      FEDSCHED_INT_FIELD("eval_every", eval_every),
      {"dataset",
       {[](SystemConfig& c, std::string_view v) {
          c.data.source = parse_source(v);
        },
        [](const SystemConfig& c) { return to_string(c.data.source); }}},
      FEDSCHED_INT_FIELD("synth_classes", data.synth_classes),
      FEDSCHED_INT_FIELD("synth_train_size", data.synth_train_size),
      FEDSCHED_INT_FIELD("synth_test_size", data.synth_test_size),
      FEDSCHED_INT_FIELD("synth_feature_dim", data.synth_feature_dim),
      FEDSCHED_REAL_FIELD("synth_separation", data.synth_separation),
      FEDSCHED_STR_FIELD("idx_train_images", data.idx_train_images),
      FEDSCHED_STR_FIELD("idx_train_labels", data.idx_train_labels),
      FEDSCHED_STR_FIELD("idx_test_images", data.idx_test_images),
      FEDSCHED_STR_FIELD("idx_test_labels", data.idx_test_labels),
  };
  return kFields;
}

#undef FEDSCHED_INT_FIELD
#undef FEDSCHED_REAL_FIELD
#undef FEDSCHED_STR_FIELD

const Field* find_field(std::string_view key) {
  for (const auto& [name, field] : fields()) {
    if (name == key) return &field;
  }
  return nullptr;
}

}  // namespace

void validate(const SystemConfig& cfg) {
  require(cfg.num_devices >= 1, "num_devices", "must be >= 1");
  require(cfg.model_dim >= 1, "model_dim", "must be >= 1");
  require(positive(cfg.bandwidth), "bandwidth", "must be > 0");
  require(positive(cfg.noise_density), "noise_density", "must be > 0");
  require(positive(cfg.eff_rx_power_P0), "eff_rx_power_P0", "must be > 0 W");
  require(positive(cfg.power_coeff), "power_coeff", "must be > 0");
  require(positive(cfg.cycles_c), "cycles_c", "must be > 0");
  require(positive(cfg.update_bits), "update_bits", "must be > 0");
  require(positive(cfg.round_latency), "round_latency", "must be > 0");
  require(positive(cfg.avg_energy), "avg_energy", "must be > 0");
  require(std::isfinite(cfg.tradeoff_V) && cfg.tradeoff_V >= 0.0,
          "tradeoff_V", "must be >= 0");
  require(std::isfinite(cfg.rate_margin) && cfg.rate_margin > 0.0 &&
              cfg.rate_margin <= 1.0,
          "rate_margin", "must lie in (0, 1]");
  require(cfg.sched_cardinality >= 1 &&
              cfg.sched_cardinality <= cfg.num_devices,
          "sched_cardinality", "must lie in [1, num_devices]");
  require(positive(cfg.cpu_freq_range.lo) && positive(cfg.cpu_freq_range.hi) &&
              cfg.cpu_freq_range.lo <= cfg.cpu_freq_range.hi,
          "cpu_freq_range", "need 0 < lo <= hi");
  require(cfg.cycles_c / cfg.cpu_freq_range.hi < cfg.round_latency,
          "cpu_freq_range",
          "fastest CPU cannot finish cycles_c within round_latency");
  require(std::isfinite(cfg.fading_dB_range.lo) &&
              std::isfinite(cfg.fading_dB_range.hi) &&
              cfg.fading_dB_range.lo <= cfg.fading_dB_range.hi,
          "fading_dB_range", "need finite lo <= hi");
  require(cfg.partition_model.kind == PartitionModel::Kind::kIid ||
              cfg.partition_model.max_labels_per_device >= 1,
          "partition_model", "shards needs at least one label per device");
  require(cfg.total_rounds >= 1, "total_rounds", "must be >= 1");
  require(positive(cfg.arrival_sigma_frac), "arrival_sigma_frac",
          "must be > 0");
  require(cfg.sgd.local_steps >= 1, "local_steps", "must be >= 1");
  require(cfg.sgd.batch_size >= 1, "batch_size", "must be >= 1");
  require(positive(cfg.sgd.learning_rate), "learning_rate", "must be > 0");
  require(cfg.hidden_width >= 1, "hidden_width", "must be >= 1");
  require(cfg.eval_every >= 1, "eval_every", "must be >= 1");
  if (cfg.data.source == DatasetSource::kSynthetic) {
    require(cfg.data.synth_classes >= 2, "synth_classes", "must be >= 2");
    require(cfg.data.synth_train_size >= cfg.num_devices, "synth_train_size",
            "must be >= num_devices");
    require(cfg.data.synth_test_size >= 1, "synth_test_size", "must be >= 1");
    require(cfg.data.synth_feature_dim >= cfg.data.synth_classes,
            "synth_feature_dim", "must be >= synth_classes");
    require(std::isfinite(cfg.data.synth_separation) &&
                cfg.data.synth_separation >= 0.0,
            "synth_separation", "must be >= 0");
  } else {
    require(!cfg.data.idx_train_images.empty(), "idx_train_images",
            "required when dataset = idx");
    require(!cfg.data.idx_train_labels.empty(), "idx_train_labels",
            "required when dataset = idx");
    require(!cfg.data.idx_test_images.empty(), "idx_test_images",
            "required when dataset = idx");
    require(!cfg.data.idx_test_labels.empty(), "idx_test_labels",
            "required when dataset = idx");
  }
}

void apply_override(SystemConfig& cfg, std::string_view key,
                    std::string_view value) {
  key = trim(key);
  const Field* field = find_field(key);
  if (field == nullptr) {
    throw ConfigError(std::string(key), "unknown key");
  }
  try {
    field->set(cfg, value);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(key), e.what());
  }
}

SystemConfig parse_config(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no),
                        "expected 'key = value'");
    }
    entries.emplace_back(std::string(trim(view.substr(0, eq))),
                         std::string(trim(view.substr(eq + 1))));
  }

  SystemConfig cfg;
  for (const auto& [k, v] : entries) {
    if (k == "model_dim") apply_override(cfg, k, v);
  }
  for (const auto& [k, v] : entries) {
    if (k != "model_dim") apply_override(cfg, k, v);
  }
  return cfg;
}

SystemConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<std::pair<std::string, std::string>> to_key_values(
    const SystemConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(fields().size());
  for (const auto& [name, field] : fields()) {
    out.emplace_back(name, field.get(cfg));
  }
  return out;
}

std::string to_config_text(const SystemConfig& cfg) {
  std::string out;
  for (const auto& [k, v] : to_key_values(cfg)) {
    out += k + " = " + v + "\n";
  }
  return out;
}

}  // namespace fedsched
