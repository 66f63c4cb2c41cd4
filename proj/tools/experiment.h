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

#ifndef FEDSCHED_TOOLS_EXPERIMENT_H_
#define FEDSCHED_TOOLS_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fedsched/config.h"
#include "fedsched/errors.h"
#include "fedsched/round_log.h"
#include "fedsched/simulator.h"
#include "fedsched/summary.h"

namespace fedsched::tools {

using KeyValue = std::pair<std::string, std::string>;

// Runs found under a directory cannot be lined up: their configs differ in
// something other than scheduler and seed, or a (scheduler, seed) pair
// repeats.
class IncomparableRunsError : public Error {
 public:
  using Error::Error;
};

struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

struct ExperimentSpec {
  std::optional<std::filesystem::path> config_path;
  std::vector<KeyValue> overrides;  // applied in order after the file
  std::vector<SchedulerKind> schedulers;
  std::vector<std::uint64_t> seeds;
  std::filesystem::path out_dir;
  std::vector<SweepAxis> sweeps;
  int jobs = 1;
};

// "key=value"; throws ConfigError on a missing '='.
KeyValue parse_key_value(std::string_view text);

// Comma-separated seeds and inclusive ranges, e.g. "1,2,7-9".
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

// Groups repeated "key=value" sweep flags into axes, keeping first-seen key
// order and value order.
std::vector<SweepAxis> group_sweeps(const std::vector<std::string>& flags);

// Config file (or defaults) plus overrides. Throws ConfigError, including
// for an unreadable config file.
SystemConfig base_config(const ExperimentSpec& spec);

struct Cell {
  std::string name;  // directory name under out_dir
  SystemConfig cfg;
  SchedulerKind scheduler;
  std::vector<KeyValue> sweep_values;
};

// Cartesian product of sweep values x schedulers x seeds, each config
// validated. Throws ConfigError.
std::vector<Cell> expand_cells(const ExperimentSpec& spec);

struct CellResult {
  Cell cell;
  RunSummary summary;
};

// Runs every cell (up to spec.jobs at a time), writing per-cell logs plus
// summary.csv under spec.out_dir. Progress lines go to `progress`.
std::vector<CellResult> run_experiment(const ExperimentSpec& spec,
                                       std::ostream& progress);

std::vector<std::string> summary_csv_columns(
    const std::vector<SweepAxis>& sweeps);

struct RunRecord {
  std::filesystem::path dir;
  std::string scheduler;
  std::uint64_t seed = 0;
  std::vector<KeyValue> config;  // manifest config echo without the seed
  CsvTable rounds;
};

// Every directory under root (recursively) holding a manifest.json.
std::vector<RunRecord> load_runs(const std::filesystem::path& root);

// Wide table: round, then per scheduler one column per seed followed by
// <scheduler>_mean and <scheduler>_std.
struct SeriesTable {
  std::string metric;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Comparison {
  SeriesTable accuracy;  // test_accuracy at evaluated rounds
  SeriesTable energy;    // cumulative_mean_energy at every round
  SeriesTable loss;      // test_loss at evaluated rounds
};

// Throws IncomparableRunsError.
Comparison compare_runs(const std::vector<RunRecord>& runs);

// Writes accuracy_vs_round.csv, energy_vs_round.csv and loss_vs_round.csv.
void write_comparison(const Comparison& cmp, const std::filesystem::path& dir);

}  // namespace fedsched::tools

#endif  // FEDSCHED_TOOLS_EXPERIMENT_H_
