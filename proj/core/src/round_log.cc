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

#include "fedsched/round_log.h"

#include <ostream>
#include <sstream>
#include <stdexcept>

#include "fedsched/errors.h"
#include "fedsched/text.h"
#include "json.hpp"

#ifndef FEDSCHED_VERSION
#define FEDSCHED_VERSION "unknown"
#endif

namespace fedsched {

const std::vector<std::string>& device_csv_columns() {
  static const std::vector<std::string> kCols = {
      "round",        "device",      "feasible",          "scheduled",
      "transmitted",  "data_available", "new_data",       "importance",
      "amount_term",  "distribution_term", "score",       "queue_before",
      "queue_after",  "cpu_freq",    "gain_sq",           "t_cmp",
      "t_tr",         "e_cmp",       "e_tr",              "energy"};
  return kCols;
}

const std::vector<std::string>& round_csv_columns() {
  static const std::vector<std::string> kCols = {
      "round",          "n_feasible",        "n_scheduled",
      "n_transmitted",  "evaluated",         "test_loss",
      "test_accuracy",  "train_loss",        "round_mean_energy",
      "cumulative_mean_energy", "max_queue"};
  return kCols;
}

namespace {

void write_header(std::ostream& out, const std::vector<std::string>& cols) {
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i > 0) out << ',';
    out << cols[i];
  }
  out << '\n';
}

}  // namespace

void write_device_csv_header(std::ostream& out) {
  write_header(out, device_csv_columns());
}

void write_round_csv_header(std::ostream& out) {
  write_header(out, round_csv_columns());
}

void append_device_rows(std::ostream& out, const RoundLog& log) {
  for (const auto& d : log.devices) {
    out << log.round << ',' << d.device << ',' << int{d.feasible} << ','
        << int{d.scheduled} << ',' << int{d.transmitted} << ','
        << d.data_available << ',' << d.new_data << ','
        << format_double(d.importance) << ','
        << format_double(d.amount_term) << ','
        << format_double(d.distribution_term) << ','
        << format_double(d.score) << ',' << format_double(d.queue_before)
        << ',' << format_double(d.queue_after) << ','
        << format_double(d.cpu_freq) << ',' << format_double(d.gain_sq) << ','
        << format_double(d.t_cmp) << ',' << format_double(d.t_tr) << ','
        << format_double(d.e_cmp) << ',' << format_double(d.e_tr) << ','
        << format_double(d.energy) << '\n';
  }
}

void append_round_row(std::ostream& out, const RoundLog& log) {
  out << log.round << ',' << log.feasible.size() << ','
      << log.scheduled.size() << ',' << log.transmitted.size() << ','
      << int{log.evaluated} << ',';
  if (log.evaluated) {
    out << format_double(log.test_loss) << ','
        << format_double(log.test_accuracy) << ','
        << format_double(log.train_loss) << ',';
  } else {
    out << ",,,";
  }
  out << format_double(log.round_mean_energy) << ','
      << format_double(log.cumulative_mean_energy) << ','
      << format_double(log.max_queue) << '\n';
}

std::string manifest_json(const SystemConfig& cfg, const SchedulerKind& kind) {
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [k, v] : to_key_values(cfg)) config[k] = v;
  nlohmann::ordered_json m;
  m["scheduler"] = kind.name();
  m["seed"] = cfg.seed;
  m["version"] = FEDSCHED_VERSION;
  m["device_csv"] = "devices.csv";
  m["round_csv"] = "rounds.csv";
  m["config"] = std::move(config);
  return m.dump(2) + "\n";
}

RunLogWriter::RunLogWriter(const std::filesystem::path& dir,
                           const SystemConfig& cfg, const SchedulerKind& kind) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream manifest(dir / "manifest.json");
    if (!manifest) {
      throw IoError("cannot write " + (dir / "manifest.json").string());
    }
    manifest << manifest_json(cfg, kind);
  }
  devices_.open(dir / "devices.csv");
  rounds_.open(dir / "rounds.csv");
  if (!devices_ || !rounds_) {
    throw IoError("cannot open CSV outputs under " + dir.string());
  }
  write_device_csv_header(devices_);
  write_round_csv_header(rounds_);
  devices_.flush();
  rounds_.flush();
}

void RunLogWriter::operator()(const RoundLog& log) {
  append_device_rows(devices_, log);
  append_round_row(rounds_, log);
  devices_.flush();
  rounds_.flush();
  if (!devices_ || !rounds_) throw IoError("write to run log failed");
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw std::out_of_range("no CSV column '" + name + "'");
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  CsvTable t;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split(line, ',');
    if (first) {
      t.header = std::move(fields);
      first = false;
      continue;
    }
    if (fields.size() != t.header.size()) {
      throw FormatError(path.string() + ": row has " +
                        std::to_string(fields.size()) + " fields, header has " +
                        std::to_string(t.header.size()));
    }
    t.rows.push_back(std::move(fields));
  }
  return t;
}

}  // namespace fedsched
