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

#include <cmath>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "fedsched/config.h"
#include "fedsched/errors.h"

namespace fedsched {
namespace {

TEST(UnitsTest, DbmToWatts) {
  EXPECT_DOUBLE_EQ(dbm_to_watts(0.0), 0.001);
  EXPECT_DOUBLE_EQ(dbm_to_watts(30.0), 1.0);
  EXPECT_NEAR(dbm_to_watts(28.0), 0.6309573, 1e-6);
}

TEST(UnitsTest, DbToLinear) {
  EXPECT_DOUBLE_EQ(db_to_linear(0.0), 1.0);
  EXPECT_NEAR(db_to_linear(-5.0), 0.3162278, 1e-6);
  EXPECT_NEAR(db_to_linear(3.0), 1.9952623, 1e-6);
}

TEST(UnitsTest, DbRoundTripOverSixDecades) {
  for (double x = 1e-6; x <= 1e6; x *= 1.37) {
    EXPECT_NEAR(db_to_linear(linear_to_db(x)), x, 1e-12 * x) << x;
  }
}

TEST(ConfigTest, DefaultsMatchReferenceTable) {
  const SystemConfig cfg;
  EXPECT_EQ(cfg.num_devices, 40);
  EXPECT_EQ(cfg.model_dim, 21840);
  EXPECT_DOUBLE_EQ(cfg.cycles_c, 600.0 * 32.0 * 21840.0);
  EXPECT_DOUBLE_EQ(cfg.update_bits, 32.0 * 21840.0);
  EXPECT_DOUBLE_EQ(cfg.eff_rx_power_P0, dbm_to_watts(28.0));
  EXPECT_DOUBLE_EQ(cfg.bandwidth, 20e6);
  EXPECT_DOUBLE_EQ(cfg.noise_density, 1e-13);
  EXPECT_DOUBLE_EQ(cfg.power_coeff, 1e-27);
  EXPECT_DOUBLE_EQ(cfg.round_latency, 4.0);
  EXPECT_DOUBLE_EQ(cfg.avg_energy, 5e-4);
  EXPECT_DOUBLE_EQ(cfg.tradeoff_V, 0.05);
  EXPECT_DOUBLE_EQ(cfg.rate_margin, 0.8);
  EXPECT_NO_THROW(validate(cfg));
}

std::string failing_field(const SystemConfig& cfg) {
  try {
    validate(cfg);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

TEST(ConfigTest, RejectsZeroRateMargin) {
  SystemConfig cfg;
  cfg.rate_margin = 0.0;
  EXPECT_EQ(failing_field(cfg), "rate_margin");
  cfg.rate_margin = 1.0;
  EXPECT_EQ(failing_field(cfg), "");
  cfg.rate_margin = 1.01;
  EXPECT_EQ(failing_field(cfg), "rate_margin");
}

TEST(ConfigTest, RejectsCpuTooSlowForRound) {
  SystemConfig cfg;
  cfg.cpu_freq_range = {0.02e9, cfg.cycles_c / 5.0};  // c / f_hi = 5 s > 4 s
  EXPECT_EQ(failing_field(cfg), "cpu_freq_range");
}

TEST(ConfigTest, RejectsCardinalityOutsideDeviceCount) {
  SystemConfig cfg;
  cfg.sched_cardinality = 0;
  EXPECT_EQ(failing_field(cfg), "sched_cardinality");
  cfg.sched_cardinality = cfg.num_devices + 1;
  EXPECT_EQ(failing_field(cfg), "sched_cardinality");
}

TEST(ConfigTest, RejectsNonPositivePhysics) {
  SystemConfig cfg;
  cfg.bandwidth = -1.0;
  EXPECT_EQ(failing_field(cfg), "bandwidth");
  cfg = SystemConfig{};
  cfg.noise_density = 0.0;
  EXPECT_EQ(failing_field(cfg), "noise_density");
  cfg = SystemConfig{};
  cfg.round_latency = std::nan("");
  EXPECT_EQ(failing_field(cfg), "round_latency");
}

TEST(ConfigTest, ParsesFileFormatWithCommentsAndDerivedSizes) {
  const auto cfg = parse_config(R"(
    # desk-scale run
    num_devices = 20
    model_dim = 1000          # re-derives c and S
    eff_rx_power_P0 = 30      # dBm
    cpu_freq_range = 0.5e9, 1.5e9
    partition_model = shards(3)
    arrival_model = uniform
    allow_shrink = true
  )");
  EXPECT_EQ(cfg.num_devices, 20);
  EXPECT_DOUBLE_EQ(cfg.cycles_c, 600.0 * 32.0 * 1000.0);
  EXPECT_DOUBLE_EQ(cfg.update_bits, 32.0 * 1000.0);
  EXPECT_DOUBLE_EQ(cfg.eff_rx_power_P0, 1.0);
  EXPECT_EQ(cfg.cpu_freq_range, (Range{0.5e9, 1.5e9}));
  EXPECT_EQ(cfg.partition_model, PartitionModel::Shards(3));
  EXPECT_EQ(cfg.arrival_model, ArrivalModel::kUniform);
  EXPECT_TRUE(cfg.allow_shrink);
}

TEST(ConfigTest, ExplicitCyclesWinOverDerivedOnes) {
  const auto cfg = parse_config("cycles_c = 12345\nmodel_dim = 10\n");
  EXPECT_DOUBLE_EQ(cfg.cycles_c, 12345.0);
  EXPECT_DOUBLE_EQ(cfg.update_bits, 320.0);
}

TEST(ConfigTest, UnknownKeyAndBadValueNameTheField) {
  try {
    parse_config("no_such_key = 1\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "no_such_key");
  }
  try {
    parse_config("num_devices = forty\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "num_devices");
  }
}

TEST(ConfigTest, CanonicalTextParsesBackToSameListing) {
  SystemConfig cfg;
  cfg.num_devices = 7;
  cfg.sched_cardinality = 3;
  cfg.partition_model = PartitionModel::Shards(2);
  cfg.new_data_window = NewDataWindow::kPerRound;
  cfg.data.idx_train_images = "/tmp/a";
  const auto reparsed = parse_config(to_config_text(cfg));
  EXPECT_EQ(to_key_values(reparsed), to_key_values(cfg));
  EXPECT_NEAR(reparsed.eff_rx_power_P0, cfg.eff_rx_power_P0, 1e-15);
}

TEST(ConfigTest, MissingFileIsIoError) {
  EXPECT_THROW(load_config_file("/nonexistent/dir/cfg.txt"), IoError);
}

}  // namespace
}  // namespace fedsched
