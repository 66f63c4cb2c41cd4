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

#include "fedsched/simulator.h"

#include <algorithm>
#include <stdexcept>

#include "fedsched/physics.h"

namespace fedsched {

std::string SchedulerKind::name() const {
  if (rule == Rule::kRandomFeasible) return "random";
  if (variant == ImportanceVariant::kCombined) return "proposed";
  return to_string(variant);
}

SchedulerKind parse_scheduler(std::string_view name) {
  if (name == "proposed" || name == "combined") return SchedulerKind::Proposed();
  if (name == "amount_only") {
    return SchedulerKind::Proposed(ImportanceVariant::kAmountOnly);
  }
  if (name == "distribution_only") {
    return SchedulerKind::Proposed(ImportanceVariant::kDistributionOnly);
  }
  if (name == "random" || name == "random_feasible") {
    return SchedulerKind::RandomFeasible();
  }
  throw std::invalid_argument("unknown scheduler '" + std::string(name) + "'");
}

Corpus load_corpus(const SystemConfig& cfg) {
  Corpus c;
  if (cfg.data.source == DatasetSource::kIdx) {
    c.train = load_idx_corpus(cfg.data.idx_train_images,
                              cfg.data.idx_train_labels);
    c.test =
        load_idx_corpus(cfg.data.idx_test_images, cfg.data.idx_test_labels);
    c.num_classes = 10;
  } else {
    Rng train_rng = rng_for(cfg.seed, StreamPurpose::kTrainCorpus);
    Rng test_rng = rng_for(cfg.seed, StreamPurpose::kTestCorpus);
    c.train = synth_corpus(cfg.data.synth_classes, cfg.data.synth_train_size,
                           cfg.data.synth_feature_dim,
                           cfg.data.synth_separation, train_rng);
    c.test = synth_corpus(cfg.data.synth_classes, cfg.data.synth_test_size,
                          cfg.data.synth_feature_dim, cfg.data.synth_separation,
                          test_rng);
    c.num_classes = cfg.data.synth_classes;
  }
  c.feature_dim =
      c.train.empty() ? 0 : static_cast<int>(c.train.front().features.size());
  return c;
}

Environment build_environment(const SystemConfig& cfg, const Corpus& corpus) {
  Environment env;
  env.num_classes = corpus.num_classes;
  env.feature_dim = corpus.feature_dim;
  env.test_set = corpus.test;

  Rng part_rng = rng_for(cfg.seed, StreamPurpose::kPartition);
  auto lists = partition(corpus.train, cfg.partition_model, cfg.num_devices,
                         part_rng);
  const double total_time = cfg.total_time();
  const double sigma = cfg.arrival_sigma_frac * total_time;
  for (int k = 0; k < cfg.num_devices; ++k) {
    Rng arr_rng = rng_for(cfg.seed, StreamPurpose::kArrival,
                          static_cast<std::uint64_t>(k));
    env.streams.push_back(
        assign_arrivals(std::move(lists[static_cast<std::size_t>(k)]),
                        cfg.arrival_model, total_time, sigma, arr_rng));
    Rng fading_rng = rng_for(cfg.seed, StreamPurpose::kFading,
                             static_cast<std::uint64_t>(k));
    env.beta.push_back(db_to_linear(
        fading_rng.uniform(cfg.fading_dB_range.lo, cfg.fading_dB_range.hi)));
  }
  return env;
}

namespace {

ModelArch arch_for(const SystemConfig& cfg, const Environment& env) {
  if (cfg.learner == LearnerArch::kMlp) {
    return ModelArch::Mlp(env.feature_dim, cfg.hidden_width, env.num_classes);
  }
  return ModelArch::Softmax(env.feature_dim, env.num_classes);
}

}  // namespace

Simulator::Simulator(SystemConfig cfg, SchedulerKind scheduler,
                     std::shared_ptr<const Environment> env)
    : cfg_(std::move(cfg)), scheduler_(scheduler), env_(std::move(env)) {
  validate(cfg_);
  if (!env_ || env_->streams.size() != static_cast<std::size_t>(cfg_.num_devices)) {
    throw std::invalid_argument("Simulator: environment does not match config");
  }
  Rng init_rng = rng_for(cfg_.seed, StreamPurpose::kModelInit);
  model_ = init_model(arch_for(cfg_, *env_), init_rng);
  const auto k = static_cast<std::size_t>(cfg_.num_devices);
  queues_.assign(k, 0.0);
  last_utilized_.assign(k, 0);
  utilized_hist_.assign(
      k, std::vector<double>(static_cast<std::size_t>(env_->num_classes), 0.0));
}

ImportanceInputs Simulator::importance_inputs(
    int t, const std::vector<int>& feasible,
    std::vector<std::size_t>& new_counts) const {
  const double t_rd = cfg_.round_latency;
  ImportanceInputs in;
  in.round = t;
  in.candidates = feasible;
  in.utilized_histogram.assign(static_cast<std::size_t>(env_->num_classes),
                               0.0);
  for (const auto& h : utilized_hist_) {
    for (std::size_t i = 0; i < h.size(); ++i) in.utilized_histogram[i] += h[i];
  }
  new_counts.assign(static_cast<std::size_t>(cfg_.num_devices), 0);
  for (int k = 0; k < cfg_.num_devices; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const double since =
        cfg_.new_data_window == NewDataWindow::kPerRound
            ? (t - 1) * t_rd
            : last_utilized_[ku] * t_rd;
    new_counts[ku] = env_->streams[ku].arrived_between(since, t * t_rd).size();
  }
  for (int k : feasible) {
    const auto ku = static_cast<std::size_t>(k);
    const double since =
        cfg_.new_data_window == NewDataWindow::kPerRound
            ? (t - 1) * t_rd
            : last_utilized_[ku] * t_rd;
    const auto fresh = env_->streams[ku].arrived_between(since, t * t_rd);
    in.new_counts.push_back(static_cast<double>(fresh.size()));
    in.new_histograms.push_back(label_histogram(fresh, env_->num_classes));
  }
  return in;
}

RoundLog Simulator::step() {
  if (done()) throw std::logic_error("Simulator::step: run already finished");
  const int t = ++round_;
  const double t_rd = cfg_.round_latency;
  const double now = t * t_rd;
  const int n_target = cfg_.sched_cardinality;
  const auto num_devices = static_cast<std::size_t>(cfg_.num_devices);

  RoundLog log;
  log.round = t;
  log.devices.resize(num_devices);

  std::vector<double> cpu(num_devices);
  for (std::size_t k = 0; k < num_devices; ++k) {
    Rng r = rng_for(cfg_.seed, StreamPurpose::kCpuFrequency, k,
                    static_cast<std::uint64_t>(t));
    cpu[k] = r.uniform(cfg_.cpu_freq_range.lo, cfg_.cpu_freq_range.hi);
    auto& rec = log.devices[k];
    rec.device = static_cast<int>(k);
    rec.cpu_freq = cpu[k];
    rec.queue_before = queues_[k];
    rec.data_available = env_->streams[k].available_at(now).size();
  }

  // Scheduling phase.
  log.feasible = feasible_set(cpu, n_target, cfg_);
  std::vector<std::size_t> new_counts;
  const ImportanceInputs inputs = importance_inputs(t, log.feasible, new_counts);
  const auto terms = importance_terms(inputs);
  const auto variant = scheduler_.variant;
  const auto imp = importance(inputs, variant);
  for (std::size_t k = 0; k < num_devices; ++k) {
    log.devices[k].new_data = new_counts[k];
  }

  std::vector<Candidate> candidates;
  candidates.reserve(log.feasible.size());
  for (std::size_t i = 0; i < log.feasible.size(); ++i) {
    const auto k = static_cast<std::size_t>(log.feasible[i]);
    auto& rec = log.devices[k];
    rec.feasible = true;
    rec.importance = imp[i];
    rec.amount_term = terms[i].amount;
    rec.distribution_term = terms[i].distribution;
    candidates.push_back(
        {log.feasible[i], queues_[k], cpu[k], imp[i], env_->beta[k]});
  }
  const SchedulingDecision decision = schedule(candidates, n_target, cfg_);
  for (std::size_t i = 0; i < decision.feasible.size(); ++i) {
    log.devices[static_cast<std::size_t>(decision.feasible[i])].score =
        decision.scores[i];
  }
  if (scheduler_.rule == SchedulerKind::Rule::kRandomFeasible) {
    Rng r = rng_for(cfg_.seed, StreamPurpose::kRandomScheduler, 0,
                    static_cast<std::uint64_t>(t));
    log.scheduled = random_schedule(log.feasible, n_target, r);
  } else {
    log.scheduled = decision.scheduled;
  }

  // Local training on S_k(t).
  std::vector<LocalUpdate> updates(num_devices);
  for (int k : log.scheduled) {
    const auto ku = static_cast<std::size_t>(k);
    auto& rec = log.devices[ku];
    rec.scheduled = true;
    const auto data = env_->streams[ku].available_at(now);
    if (!data.empty()) {
      Rng r = rng_for(cfg_.seed, StreamPurpose::kLocalTraining, ku,
                      static_cast<std::uint64_t>(t));
      updates[ku] = local_train(model_, data, cfg_.sgd, r);
    }
  }

  // Aggregation phase: realised channels, pruning, energy.
  std::vector<TrainedDevice> trained;
  trained.reserve(log.scheduled.size());
  for (int k : log.scheduled) {
    const auto ku = static_cast<std::size_t>(k);
    auto& rec = log.devices[ku];
    Rng r = rng_for(cfg_.seed, StreamPurpose::kChannelGain, ku,
                    static_cast<std::uint64_t>(t));
    rec.gain_sq = draw_channel(env_->beta[ku], r);
    rec.t_cmp = compute_time(rec.cpu_freq, cfg_);
    rec.e_cmp = compute_energy(rec.cpu_freq, cfg_);
    trained.push_back({k, rec.gain_sq, env_->beta[ku], rec.t_cmp});
  }
  PruneResult pruned = prune(trained, cfg_);
  log.transmitted = pruned.kept;
  log.removed = std::move(pruned.removed);

  const double rho = log.transmitted.empty()
                         ? 0.0
                         : 1.0 / static_cast<double>(log.transmitted.size());
  for (int k : log.transmitted) {
    const auto ku = static_cast<std::size_t>(k);
    auto& rec = log.devices[ku];
    rec.transmitted = true;
    const double p_tx = tx_power_for(env_->beta[ku], cfg_);
    const double rate = achievable_rate(rho, p_tx, rec.gain_sq, cfg_);
    const Transmission tx = transmission(rate, p_tx, cfg_);
    rec.t_tr = tx.t_tr;
    rec.e_tr = tx.e_tr;
  }

  double round_energy = 0.0;
  for (std::size_t k = 0; k < num_devices; ++k) {
    auto& rec = log.devices[k];
    if (rec.scheduled) rec.energy = rec.e_cmp + rec.e_tr;
    rec.queue_after = queue_update(queues_[k], rec.scheduled, rec.energy,
                                   cfg_.avg_energy);
    queues_[k] = rec.queue_after;
    round_energy += rec.energy;
    log.max_queue = std::max(log.max_queue, rec.queue_after);
  }
  log.round_mean_energy = round_energy / static_cast<double>(num_devices);
  energy_sum_ += log.round_mean_energy;
  log.cumulative_mean_energy = energy_sum_ / static_cast<double>(t);

  std::vector<LocalUpdate> received;
  for (int k : log.transmitted) {
    const auto ku = static_cast<std::size_t>(k);
    if (updates[ku].data_size == 0) continue;
    received.push_back(std::move(updates[ku]));
    last_utilized_[ku] = t;
    utilized_hist_[ku] = label_histogram(env_->streams[ku].available_at(now),
                                         env_->num_classes);
  }
  if (!received.empty()) model_ = aggregate(model_, received);

  if (t % cfg_.eval_every == 0 || t == cfg_.total_rounds) {
    log.evaluated = true;
    const Evaluation test = evaluate(model_, env_->test_set);
    log.test_loss = test.loss;
    log.test_accuracy = test.accuracy;
    double weighted = 0.0;
    std::size_t total = 0;
    for (const auto& stream : env_->streams) {
      const auto data = stream.available_at(now);
      if (data.empty()) continue;
      weighted += evaluate(model_, data).loss * static_cast<double>(data.size());
      total += data.size();
    }
    log.train_loss = total > 0 ? weighted / static_cast<double>(total) : 0.0;
  }
  return log;
}

std::vector<RoundLog> run(const SystemConfig& cfg, SchedulerKind scheduler,
                          const Corpus& corpus, const RoundSink& on_round) {
  validate(cfg);
  auto env = std::make_shared<const Environment>(build_environment(cfg, corpus));
  Simulator sim(cfg, scheduler, std::move(env));
  std::vector<RoundLog> logs;
  logs.reserve(static_cast<std::size_t>(cfg.total_rounds));
  while (!sim.done()) {
    logs.push_back(sim.step());
    if (on_round) on_round(logs.back());
  }
  return logs;
}

std::vector<RoundLog> run(const SystemConfig& cfg, SchedulerKind scheduler,
                          const RoundSink& on_round) {
  validate(cfg);
  return run(cfg, scheduler, load_corpus(cfg), on_round);
}

}  // namespace fedsched
