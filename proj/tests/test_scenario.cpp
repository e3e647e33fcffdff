// satee - energy-efficient precoding and feeder-link-beam matching for bent-pipe SATCOM
// Copyright (C) 2026 The satee authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <string>

#include "satee/scenario.hpp"

using namespace satee;
using json = nlohmann::ordered_json;

namespace {

// A minimal valid document exercising the dB-denominated spellings.
json minimal_doc() {
  json doc;
  doc["schema_version"] = 1;
  doc["seed"] = 7;
  doc["feeder"] = {
      {"gateways", json::array({json{{"lat_deg", 50.0}, {"lon_deg", 5.1}},
                                json{{"lat_deg", 49.7}, {"lon_deg", 6.3}}})},
      {"feeds_per_gateway", 1},
      {"sat_longitude_deg", 13.0},
      {"rx_element_separation_m", 3.0},
      {"gw_antenna_diameter_m", 6.8},
      {"sat_rx_antenna_diameter_m", 1.4},
      {"misc_loss_db", 1.0},
      {"subcarrier_freqs_ghz", json::array({49.0, 49.5})},
      {"antenna_efficiency", 0.6}};
  doc["impairments"] = {{"atm_amplitude_min", 0.9}, {"phase_noise_max_deg", 10.0}};
  json pts = json::array();
  for (int i = 0; i < 4; ++i)
    pts.push_back(json{{"lat_deg", 45.0 + i}, {"lon_deg", 8.0 + i}});
  doc["users"] = {{"positions", pts},
                  {"beam_centers", pts},
                  {"rician_factor_db", 10.0},
                  {"downlink_carrier_ghz", 19.5},
                  {"terminal_gain_dbi", 39.6},
                  {"beam_peak_gain_dbi", 51.8},
                  {"beam_3db_width_deg", 0.4}};
  doc["power"] = {{"gw_hw_power_w", 10.0}, {"sat_hw_power_w", 5.0},
                  {"rho_gw", 0.6},         {"rho_sa", 0.6},
                  {"baud_rate_mhz", 250.0}, {"noise_sat_dbw", -121.3},
                  {"noise_user_dbw", -118.6}};
  doc["budgets"] = {{"gw_dbw", 15.0}, {"sat_dbw", 5.0}};
  doc["weights"] = {{"delta_gw", 1.0}, {"delta_sa", 1.0}};
  return doc;
}

}  // namespace

TEST_CASE("default scenario is valid and sized as documented") {
  const Scenario s = default_table1_scenario();
  CHECK_NOTHROW(s.validate());
  CHECK(s.num_feeds() == 2);
  CHECK(s.num_subcarriers() == 5);
  CHECK(s.num_fl() == 10);
  CHECK(s.num_users() == 10);
  CHECK(s.sat_budget_w == doctest::Approx(std::pow(10.0, 0.5)));
  CHECK(s.gw_budget_w == doctest::Approx(std::pow(10.0, 1.5)));
}

TEST_CASE("serialize/load round trip is bit exact") {
  const Scenario s = default_table1_scenario();
  const std::string text = serialize_scenario(s);
  const Scenario s2 = load_scenario(text);
  CHECK(serialize_scenario(s2) == text);
  CHECK(scenario_hash(s2) == scenario_hash(s));

  // Hash is stable across calls and sensitive to content.
  CHECK(scenario_hash(s) == scenario_hash(s));
  Scenario s3 = s;
  s3.seed = s.seed + 1;
  CHECK(scenario_hash(s3) != scenario_hash(s));
}

TEST_CASE("dB-denominated keys convert exactly once") {
  const Scenario s = load_scenario(minimal_doc().dump());
  CHECK(s.feeder.subcarrier_freqs_hz[0] == doctest::Approx(49.0e9));
  CHECK(s.users.rician_factor == doctest::Approx(10.0));  // 10 dB -> linear 10
  CHECK(s.users.downlink_carrier_hz == doctest::Approx(19.5e9));
  CHECK(s.power.baud_rate_hz == doctest::Approx(250e6));
  CHECK(s.power.noise_cov_sat(0) == doctest::Approx(std::pow(10.0, -12.13)));
  CHECK(s.power.noise_user(0) == doctest::Approx(std::pow(10.0, -11.86)));
  CHECK(s.gw_budget_w == doctest::Approx(std::pow(10.0, 1.5)));
  CHECK(s.sat_budget_w == doctest::Approx(std::pow(10.0, 0.5)));
  CHECK(s.num_fl() == 4);
}

TEST_CASE("loader rejects malformed documents") {
  CHECK_THROWS_AS((void)load_scenario("{ not json"), std::runtime_error);
  CHECK_THROWS_AS((void)load_scenario("[1, 2]"), std::runtime_error);

  // Parse errors carry a line/column location.
  try {
    (void)load_scenario("{\n  \"schema_version\": 1,\n  oops\n}");
    FAIL("expected a parse error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }

  json doc = minimal_doc();
  doc["surprise"] = 1;
  CHECK_THROWS_WITH_AS((void)load_scenario(doc.dump()),
                       doctest::Contains("unknown key 'surprise'"),
                       std::runtime_error);

  doc = minimal_doc();
  doc.erase("budgets");
  CHECK_THROWS_WITH_AS((void)load_scenario(doc.dump()),
                       doctest::Contains("budgets"), std::runtime_error);

  // Providing both the dB and the linear spelling is ambiguous.
  doc = minimal_doc();
  doc["budgets"]["sat_w"] = 3.0;
  CHECK_THROWS_WITH_AS((void)load_scenario(doc.dump()),
                       doctest::Contains("exactly one"), std::runtime_error);

  // Beam count must equal S * L.
  doc = minimal_doc();
  doc["users"]["beam_centers"].erase(3);
  CHECK_THROWS_WITH_AS((void)load_scenario(doc.dump()),
                       doctest::Contains("N = S*L"), std::runtime_error);

  doc = minimal_doc();
  doc["schema_version"] = 2;
  CHECK_THROWS_AS((void)load_scenario(doc.dump()), std::runtime_error);
}

TEST_CASE("realize is deterministic in (seed, offset)") {
  Scenario s = default_table1_scenario();
  const Realization a = realize(s, 3);
  const Realization b = realize(s, 3);
  CHECK((a.feeder.assembled - b.feeder.assembled).norm() == 0.0);
  CHECK((a.user.matrix - b.user.matrix).norm() == 0.0);

  // Different offsets and different seeds give different draws.
  const Realization c = realize(s, 4);
  CHECK((a.feeder.assembled - c.feeder.assembled).norm() > 0.0);
  CHECK((a.user.matrix - c.user.matrix).norm() > 0.0);
  s.seed = 99;
  const Realization d = realize(s, 3);
  CHECK((a.feeder.assembled - d.feeder.assembled).norm() > 0.0);
}

TEST_CASE("realized channels have the documented shape") {
  const Scenario s = default_table1_scenario();
  const Realization r = realize(s, 0);
  const int n = s.num_fl();
  REQUIRE(r.feeder.assembled.rows() == n);
  REQUIRE(r.feeder.assembled.cols() == n);
  REQUIRE(static_cast<int>(r.feeder.blocks.size()) == s.num_subcarriers());
  REQUIRE(r.user.matrix.rows() == n);
  REQUIRE(r.user.matrix.cols() == s.num_users());
  CHECK(r.feeder.assembled.allFinite());
  CHECK(r.user.matrix.allFinite());

  // Block-diagonal: off-block entries are exactly zero.
  const int L = s.num_feeds();
  for (int i = 0; i < s.num_subcarriers(); ++i)
    for (int j = 0; j < s.num_subcarriers(); ++j) {
      if (i == j) continue;
      CHECK(r.feeder.assembled.block(i * L, j * L, L, L).norm() == 0.0);
    }
}

TEST_CASE("algo parameter validation") {
  AlgoParams a;
  CHECK_NOTHROW(a.validate());
  a.tol_out = 0.0;
  CHECK_THROWS_AS(a.validate(), std::invalid_argument);
  a = AlgoParams{};
  a.max_inner = 0;
  CHECK_THROWS_AS(a.validate(), std::invalid_argument);
  a = AlgoParams{};
  a.epsilon = -1.0;
  CHECK_THROWS_AS(a.validate(), std::invalid_argument);
}
