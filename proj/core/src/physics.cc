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

#include "fedsched/physics.h"

#include <cmath>

#include "fedsched/errors.h"

namespace fedsched {

double compute_energy(double freq_hz, const SystemConfig& cfg) {
  return cfg.power_coeff * cfg.cycles_c * freq_hz * freq_hz;
}

double compute_time(double freq_hz, const SystemConfig& cfg) {
  return cfg.cycles_c / freq_hz;
}

double achievable_rate(double rho, double p_tx, double gain_sq,
                       const SystemConfig& cfg) {
  if (gain_sq <= 0.0) return 0.0;
  const double share = rho * cfg.bandwidth;
  return share * std::log2(1.0 + p_tx * gain_sq / (share * cfg.noise_density));
}

Transmission transmission(double rate, double p_tx, const SystemConfig& cfg) {
  if (!(rate > 0.0)) {
    throw ZeroRateError("transmission requested at non-positive rate");
  }
  const double t_tr = cfg.update_bits / rate;
  return {t_tr, p_tx * t_tr};
}

double surrogate_rate(int n_sched, const SystemConfig& cfg) {
  const double n = n_sched;
  return cfg.rate_margin * cfg.bandwidth / n *
         std::log2(1.0 + cfg.eff_rx_power_P0 * n /
                             (cfg.bandwidth * cfg.noise_density));
}

double tx_power_for(double beta, const SystemConfig& cfg) {
  return cfg.eff_rx_power_P0 / beta;
}

double draw_channel(double beta, Rng& rng) {
  return beta * rng.exponential();
}

}  // namespace fedsched
