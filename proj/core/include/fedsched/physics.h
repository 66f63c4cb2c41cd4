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

#ifndef FEDSCHED_PHYSICS_H_
#define FEDSCHED_PHYSICS_H_

#include "fedsched/config.h"
#include "fedsched/rng.h"

namespace fedsched {

// Per-device energy and latency of one round. Times in seconds, energies in
// joules, rate in bits/s.
struct PhysicsOutcome {
  double rate = 0.0;
  double t_tr = 0.0;
  double t_cmp = 0.0;
  double e_cmp = 0.0;
  double e_tr = 0.0;
};

struct Transmission {
  double t_tr = 0.0;
  double e_tr = 0.0;
};

// lambda * c * f^2.
double compute_energy(double freq_hz, const SystemConfig& cfg);

// c / f.
double compute_time(double freq_hz, const SystemConfig& cfg);

// Shannon rate over a bandwidth share rho:
//   rho * B * log2(1 + p_tx * |g|^2 / (rho * B * N0)).
double achievable_rate(double rho, double p_tx, double gain_sq,
                       const SystemConfig& cfg);

// S / rate and p_tx * S / rate. Throws ZeroRateError when rate <= 0.
Transmission transmission(double rate, double p_tx, const SystemConfig& cfg);

// Pre-training rate estimate for n equally sharing devices, with the channel
// replaced by its mean and the margin gamma applied:
//   (gamma * B / n) * log2(1 + P0 * n / (B * N0)).
double surrogate_rate(int n_sched, const SystemConfig& cfg);

// Channel inversion on the large-scale fading: P0 / beta.
double tx_power_for(double beta, const SystemConfig& cfg);

// Small-scale fading |g|^2 ~ Exp(mean = beta) (Rayleigh amplitude).
double draw_channel(double beta, Rng& rng);

}  // namespace fedsched

#endif  // FEDSCHED_PHYSICS_H_
