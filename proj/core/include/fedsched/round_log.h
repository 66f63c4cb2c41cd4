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

#ifndef FEDSCHED_ROUND_LOG_H_
#define FEDSCHED_ROUND_LOG_H_

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>
#include <vector>

#include "fedsched/config.h"
#include "fedsched/simulator.h"

namespace fedsched {

// devices.csv: one row per device per round, columns in this order.
const std::vector<std::string>& device_csv_columns();
// rounds.csv: one row per round. Evaluation columns are empty on rounds
// without an evaluation.
const std::vector<std::string>& round_csv_columns();

void write_device_csv_header(std::ostream& out);
void append_device_rows(std::ostream& out, const RoundLog& log);
void write_round_csv_header(std::ostream& out);
void append_round_row(std::ostream& out, const RoundLog& log);

// Run manifest: config echo (canonical key/values), seed, scheduler and
// library version.
std::string manifest_json(const SystemConfig& cfg, const SchedulerKind& kind);

// Streams a run into <dir>/devices.csv and <dir>/rounds.csv, flushing after
// every round, and writes <dir>/manifest.json up front.
class RunLogWriter {
 public:
  RunLogWriter(const std::filesystem::path& dir, const SystemConfig& cfg,
               const SchedulerKind& kind);

  void operator()(const RoundLog& log);

 private:
  std::ofstream devices_;
  std::ofstream rounds_;
};

// Minimal reader for the CSVs above (no quoting; fields never contain
// commas).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column index by name; throws std::out_of_range.
  std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace fedsched

#endif  // FEDSCHED_ROUND_LOG_H_
