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

// fedsched: run scheduling experiments and compare their outputs.
//
// Exit codes: 0 ok, 1 usage, 2 config, 3 runtime.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "experiment.h"
#include "fedsched/errors.h"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kConfig = 2;
constexpr int kRuntime = 3;

using fedsched::tools::ExperimentSpec;

struct CommonFlags {
  std::string config;
  std::vector<std::string> sets;
};

void add_config_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config, "Config file (key = value lines)");
  cmd->add_option("--set", flags.sets, "Override one key, key=value (repeatable)")
      ->take_all();
}

ExperimentSpec spec_from(const CommonFlags& flags) {
  ExperimentSpec spec;
  if (!flags.config.empty()) spec.config_path = flags.config;
  for (const auto& s : flags.sets) {
    spec.overrides.push_back(fedsched::tools::parse_key_value(s));
  }
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate and compare device scheduling for federated edge learning"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  std::vector<std::string> schedulers = {"proposed", "random"};
  std::string seeds = "1";
  std::string out;
  std::vector<std::string> sweeps;
  int jobs = 1;
  auto* run = app.add_subcommand("run", "Run every (sweep, scheduler, seed) cell");
  add_config_flags(run, run_flags);
  run->add_option("--scheduler", schedulers,
                  "proposed, amount_only, distribution_only or random")
      ->delimiter(',')
      ->take_all();
  run->add_option("--seeds", seeds, "Seed list, e.g. 1,2,5-8");
  run->add_option("--out", out, "Output directory")->required();
  run->add_option("--jobs", jobs, "Cells run in parallel")->check(CLI::PositiveNumber);
  run->add_option("--sweep", sweeps, "Sweep value key=value (repeat per value)")
      ->take_all();

  std::string compare_dir;
  std::string compare_out;
  auto* compare = app.add_subcommand("compare", "Align completed runs into tables");
  compare->add_option("dir", compare_dir, "Directory of completed runs")->required();
  compare->add_option("--out", compare_out, "Output directory (default <dir>/compare)");

  CommonFlags validate_flags;
  auto* validate = app.add_subcommand(
      "validate-config", "Check a config and print its canonical form");
  add_config_flags(validate, validate_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run) {
      auto spec = spec_from(run_flags);
      for (const auto& name : schedulers) {
        try {
          spec.schedulers.push_back(fedsched::parse_scheduler(name));
        } catch (const std::invalid_argument& e) {
          throw fedsched::ConfigError("scheduler", e.what());
        }
      }
      spec.seeds = fedsched::tools::parse_seed_list(seeds);
      spec.out_dir = out;
      spec.sweeps = fedsched::tools::group_sweeps(sweeps);
      spec.jobs = jobs;
      const auto results = fedsched::tools::run_experiment(spec, std::cerr);
      std::cout << "wrote " << results.size() << " runs and summary.csv to " << out
                << "\n";
    } else if (*compare) {
      const auto runs = fedsched::tools::load_runs(compare_dir);
      const auto cmp = fedsched::tools::compare_runs(runs);
      const std::string dest =
          compare_out.empty() ? compare_dir + "/compare" : compare_out;
      fedsched::tools::write_comparison(cmp, dest);
      std::cout << "compared " << runs.size() << " runs; tables in " << dest << "\n";
    } else if (*validate) {
      const auto cfg = fedsched::tools::base_config(spec_from(validate_flags));
      std::cout << fedsched::to_config_text(cfg);
    }
  } catch (const fedsched::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const fedsched::tools::IncomparableRunsError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kOk;
}
