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

#ifndef FEDSCHED_RNG_H_
#define FEDSCHED_RNG_H_

#include <cstdint>
#include <cmath>
#include <random>

namespace fedsched {

// What a random stream is used for. Part of the substream key, so two
// purposes never share draws.
enum class StreamPurpose : std::uint64_t {
  kTrainCorpus = 1,
  kTestCorpus,
  kPartition,
  kArrival,
  kFading,
  kCpuFrequency,
  kChannelGain,
  kLocalTraining,
  kRandomScheduler,
  kModelInit,
  kTest,
};

// Thin wrapper over a 64-bit Mersenne twister with the handful of
// distributions the simulator needs. Satisfies UniformRandomBitGenerator so
// it can drive std::shuffle and friends directly.
class Rng {
 public:
  using result_type = std::mt19937_64::result_type;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
  }
  double normal() { return std::normal_distribution<double>()(engine_); }
  // Exp(1).
  double exponential() { return -std::log1p(-uniform()); }

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finaliser; used to derive substream seeds.
std::uint64_t mix64(std::uint64_t x);

// Independent, reproducible stream keyed by (seed, purpose, device, round).
// Draws for one key never depend on how many draws other keys consumed.
Rng rng_for(std::uint64_t seed, StreamPurpose purpose, std::uint64_t device = 0,
            std::uint64_t round = 0);

}  // namespace fedsched

#endif  // FEDSCHED_RNG_H_
