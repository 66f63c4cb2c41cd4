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

#include "experiment.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "json.hpp"

#include "fedsched/text.h"

namespace fedsched::tools {

namespace fs = std::filesystem;

KeyValue parse_key_value(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError(std::string(trim(text)), "expected key=value");
  }
  return {std::string(trim(text.substr(0, eq))),
          std::string(trim(text.substr(eq + 1)))};
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  for (const auto& item : split(text, ',')) {
    const auto part = trim(item);
    if (part.empty()) continue;
    try {
      const auto dash = part.find('-');
      if (dash == std::string_view::npos) {
        seeds.push_back(parse_uint(part));
        continue;
      }
      const auto lo = parse_uint(trim(part.substr(0, dash)));
      const auto hi = parse_uint(trim(part.substr(dash + 1)));
      if (hi < lo) throw std::invalid_argument("descending range");
      for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("seeds", "bad seed list entry '" + std::string(part) +
                                     "': " + e.what());
    }
  }
  if (seeds.empty()) throw ConfigError("seeds", "no seeds given");
  return seeds;
}

std::vector<SweepAxis> group_sweeps(const std::vector<std::string>& flags) {
  std::vector<SweepAxis> axes;
  for (const auto& flag : flags) {
    auto [key, value] = parse_key_value(flag);
    auto it = std::find_if(axes.begin(), axes.end(),
                           [&](const SweepAxis& a) { return a.key == key; });
    if (it == axes.end()) {
      axes.push_back({key, {}});
      it = axes.end() - 1;
    }
    it->values.push_back(std::move(value));
  }
  return axes;
}

SystemConfig base_config(const ExperimentSpec& spec) {
  SystemConfig cfg;
  if (spec.config_path) {
    try {
      cfg = load_config_file(*spec.config_path);
    } catch (const IoError& e) {
      throw ConfigError("config", e.what());
    }
  }
  for (const auto& [k, v] : spec.overrides) apply_override(cfg, k, v);
  validate(cfg);
  return cfg;
}

namespace {

std::string sanitize(std::string_view s) {
  std::string out;
  for (char c : s) {
    const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '.' ||
                      c == '-' || c == '_';
    out.push_back(keep ? c : '_');
  }
  return out;
}

}  // namespace

std::vector<Cell> expand_cells(const ExperimentSpec& spec) {
  if (spec.schedulers.empty()) {
    throw ConfigError("scheduler", "at least one scheduler is required");
  }
  if (spec.seeds.empty()) throw ConfigError("seeds", "at least one seed is required");
  if (spec.jobs < 1) throw ConfigError("jobs", "must be >= 1");
  for (const auto& axis : spec.sweeps) {
    if (axis.key == "seed") {
      throw ConfigError("sweep", "use --seeds instead of sweeping seed");
    }
  }
  const SystemConfig base = base_config(spec);

  // Sweep points as an odometer over the axes.
  std::vector<std::vector<KeyValue>> points = {{}};
  for (const auto& axis : spec.sweeps) {
    std::vector<std::vector<KeyValue>> next;
    for (const auto& p : points) {
      for (const auto& v : axis.values) {
        auto q = p;
        q.emplace_back(axis.key, v);
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }

  std::vector<Cell> cells;
  std::set<std::string> names;
  for (const auto& point : points) {
    SystemConfig cfg = base;
    std::string prefix;
    for (const auto& [k, v] : point) {
      apply_override(cfg, k, v);
      prefix += sanitize(k) + "=" + sanitize(v) + "__";
    }
    for (const auto& kind : spec.schedulers) {
      for (auto seed : spec.seeds) {
        Cell cell{prefix + kind.name() + "__seed" + std::to_string(seed), cfg, kind,
                  point};
        cell.cfg.seed = seed;
        validate(cell.cfg);
        if (!names.insert(cell.name).second) {
          throw ConfigError("scheduler", "duplicate cell " + cell.name);
        }
        cells.push_back(std::move(cell));
      }
    }
  }
  return cells;
}

std::vector<std::string> summary_csv_columns(const std::vector<SweepAxis>& sweeps) {
  std::vector<std::string> cols = {"cell", "scheduler", "seed"};
  for (const auto& axis : sweeps) cols.push_back(axis.key);
  for (const char* c : {"rounds", "mean_energy_per_device", "final_accuracy",
                        "final_loss", "rolling_accuracy", "max_queue"}) {
    cols.emplace_back(c);
  }
  return cols;
}

namespace {

constexpr int kRollingWindow = 5;

void ensure_writable(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  const auto probe = dir / ".write_probe";
  std::ofstream out(probe);
  if (ec || !out) {
    throw ConfigError("out", "output directory is not writable: " + dir.string());
  }
  out.close();
  fs::remove(probe, ec);
}

std::string join(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += fields[i];
  }
  return line;
}

}  // namespace

std::vector<CellResult> run_experiment(const ExperimentSpec& spec,
                                       std::ostream& progress) {
  const auto cells = expand_cells(spec);
  ensure_writable(spec.out_dir);

  std::vector<CellResult> results(cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr failure;
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      {
        std::lock_guard lock(mu);
        if (failure) return;
      }
      try {
        const Cell& cell = cells[i];
        RunLogWriter writer(spec.out_dir / cell.name, cell.cfg, cell.scheduler);
        const auto logs = run(cell.cfg, cell.scheduler, std::ref(writer));
        results[i] = {cell, summarize(logs, kRollingWindow)};
        std::lock_guard lock(mu);
        progress << "[" << i + 1 << "/" << cells.size() << "] " << cell.name
                 << ": accuracy " << results[i].summary.final_accuracy
                 << ", energy/device " << results[i].summary.mean_energy_per_device
                 << " J\n";
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  const int threads =
      std::min<int>(spec.jobs, static_cast<int>(std::max<std::size_t>(cells.size(), 1)));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::ofstream summary(spec.out_dir / "summary.csv");
  if (!summary) throw IoError("cannot write " + (spec.out_dir / "summary.csv").string());
  summary << join(summary_csv_columns(spec.sweeps)) << '\n';
  for (const auto& r : results) {
    std::vector<std::string> row = {r.cell.name, r.cell.scheduler.name(),
                                    std::to_string(r.cell.cfg.seed)};
    for (const auto& kv : r.cell.sweep_values) row.push_back(kv.second);
    row.push_back(std::to_string(r.summary.rounds));
    for (double v : {r.summary.mean_energy_per_device, r.summary.final_accuracy,
                     r.summary.final_loss, r.summary.rolling_accuracy,
                     r.summary.max_queue}) {
      row.push_back(format_double(v));
    }
    summary << join(row) << '\n';
  }
  if (!summary) throw IoError("write to summary.csv failed");
  return results;
}

std::vector<RunRecord> load_runs(const fs::path& root) {
  if (!fs::is_directory(root)) throw IoError("not a directory: " + root.string());
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file() && entry.path().filename() == "manifest.json") {
      dirs.push_back(entry.path().parent_path());
    }
  }
  std::sort(dirs.begin(), dirs.end());
  std::vector<RunRecord> runs;
  for (const auto& dir : dirs) {
    std::ifstream in(dir / "manifest.json");
    nlohmann::ordered_json m;
    try {
      m = nlohmann::ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError((dir / "manifest.json").string() + ": " + e.what());
    }
    RunRecord r;
    r.dir = dir;
    r.scheduler = m.at("scheduler").get<std::string>();
    r.seed = m.at("seed").get<std::uint64_t>();
    for (const auto& [k, v] : m.at("config").items()) {
      if (k != "seed") r.config.emplace_back(k, v.get<std::string>());
    }
    r.rounds = read_csv(dir / m.at("round_csv").get<std::string>());
    runs.push_back(std::move(r));
  }
  return runs;
}

namespace {

std::string describe_difference(const RunRecord& a, const RunRecord& b) {
  std::map<std::string, std::string> lhs(a.config.begin(), a.config.end());
  std::map<std::string, std::string> rhs(b.config.begin(), b.config.end());
  for (const auto& [k, v] : lhs) {
    const auto it = rhs.find(k);
    const std::string other = it == rhs.end() ? "<missing>" : it->second;
    if (other != v) return k + " is " + v + " in " + a.dir.string() + " but " + other + " in " + b.dir.string();
  }
  for (const auto& [k, v] : rhs) {
    if (!lhs.count(k)) return k + " is missing from " + a.dir.string();
  }
  return "configs differ";
}

struct Series {
  std::string scheduler;
  std::uint64_t seed;
  std::map<int, double> values;
};

SeriesTable build_table(const std::string& metric, std::vector<Series> series) {
  std::sort(series.begin(), series.end(), [](const Series& a, const Series& b) {
    return std::tie(a.scheduler, a.seed) < std::tie(b.scheduler, b.seed);
  });
  // Rounds present in every run.
  std::set<int> rounds;
  if (!series.empty()) {
    for (const auto& [r, v] : series.front().values) rounds.insert(r);
  }
  for (const auto& s : series) {
    std::set<int> keep;
    for (int r : rounds) {
      if (s.values.count(r)) keep.insert(r);
    }
    rounds = std::move(keep);
  }

  SeriesTable table;
  table.metric = metric;
  table.header.push_back("round");
  std::vector<std::pair<std::string, std::vector<std::size_t>>> groups;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (groups.empty() || groups.back().first != series[i].scheduler) {
      groups.push_back({series[i].scheduler, {}});
    }
    groups.back().second.push_back(i);
  }
  for (const auto& [name, members] : groups) {
    for (auto i : members) {
      table.header.push_back(name + "_seed" + std::to_string(series[i].seed));
    }
    table.header.push_back(name + "_mean");
    table.header.push_back(name + "_std");
  }
  for (int r : rounds) {
    std::vector<std::string> row = {std::to_string(r)};
    for (const auto& [name, members] : groups) {
      double sum = 0.0;
      for (auto i : members) {
        const double v = series[i].values.at(r);
        sum += v;
        row.push_back(format_double(v));
      }
      const double n = static_cast<double>(members.size());
      const double mean = sum / n;
      double ss = 0.0;
      for (auto i : members) {
        const double d = series[i].values.at(r) - mean;
        ss += d * d;
      }
      row.push_back(format_double(mean));
      row.push_back(format_double(members.size() > 1 ? std::sqrt(ss / (n - 1)) : 0.0));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace

Comparison compare_runs(const std::vector<RunRecord>& runs) {
  if (runs.empty()) throw IncomparableRunsError("no runs found");
  std::set<std::pair<std::string, std::uint64_t>> seen;
  for (const auto& r : runs) {
    if (r.config != runs.front().config) {
      throw IncomparableRunsError("runs are not comparable: " +
                                  describe_difference(runs.front(), r));
    }
    if (!seen.insert({r.scheduler, r.seed}).second) {
      throw IncomparableRunsError("duplicate run for scheduler " + r.scheduler +
                                  " seed " + std::to_string(r.seed) + " in " +
                                  r.dir.string());
    }
  }

  std::vector<Series> accuracy;
  std::vector<Series> energy;
  std::vector<Series> loss;
  for (const auto& r : runs) {
    const auto c_round = r.rounds.column("round");
    const auto c_eval = r.rounds.column("evaluated");
    const auto c_acc = r.rounds.column("test_accuracy");
    const auto c_loss = r.rounds.column("test_loss");
    const auto c_energy = r.rounds.column("cumulative_mean_energy");
    Series a{r.scheduler, r.seed, {}};
    Series e = a;
    Series l = a;
    for (const auto& row : r.rounds.rows) {
      const int round = static_cast<int>(parse_int(row[c_round]));
      e.values[round] = parse_double(row[c_energy]);
      if (parse_bool(row[c_eval])) {
        a.values[round] = parse_double(row[c_acc]);
        l.values[round] = parse_double(row[c_loss]);
      }
    }
    accuracy.push_back(std::move(a));
    energy.push_back(std::move(e));
    loss.push_back(std::move(l));
  }
  return {build_table("test_accuracy", std::move(accuracy)),
          build_table("cumulative_mean_energy", std::move(energy)),
          build_table("test_loss", std::move(loss))};
}

void write_comparison(const Comparison& cmp, const fs::path& dir) {
  fs::create_directories(dir);
  const std::pair<const SeriesTable*, const char*> files[] = {
      {&cmp.accuracy, "accuracy_vs_round.csv"},
      {&cmp.energy, "energy_vs_round.csv"},
      {&cmp.loss, "loss_vs_round.csv"}};
  for (const auto& [table, name] : files) {
    std::ofstream out(dir / name);
    if (!out) throw IoError("cannot write " + (dir / name).string());
    out << join(table->header) << '\n';
    for (const auto& row : table->rows) out << join(row) << '\n';
  }
}

}  // namespace fedsched::tools
