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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "satee/channel.hpp"
#include "satee/power.hpp"

namespace satee {

struct AlgoParams {
  double tol_out = 1e-4;     // Dinkelbach |eta change| stop
  int max_outer = 300;
  double tol_inner = 1e-5;   // relative objective change in the inner loop
  int max_inner = 25;
  double epsilon = 1e-6;     // reweighting smoothing
  double qcqp_tol = 1e-7;
  int qcqp_max_iter = 5000;

  void validate() const;
};

/// Distribution parameters for the per-realization impairment draws.
struct ImpairmentLaw {
  double atm_amplitude_min = 0.9;     // |alpha_l| ~ U[min, 1]
  double phase_noise_max_deg = 10.0;  // phases ~ U[-max, max]

  void validate() const;
};

/// Static user-link description; the NLOS and phase draws come from realize().
struct UserLaw {
  std::vector<GroundPoint> user_positions;  // K
  std::vector<GroundPoint> beam_centers;    // N
  double rician_factor = 10.0;              // linear
  double downlink_carrier_hz = 19.5e9;
  double terminal_gain_dbi = 39.6;          // user terminal receive gain
  double beam_peak_gain_dbi = 51.8;         // satellite transmit boresight gain
  double beam_3db_width_deg = 0.4;

  void validate() const;
};

struct Scenario {
  int schema_version = 1;
  std::uint64_t seed = 1;
  FeederGeometry feeder;
  ImpairmentLaw impairments;
  UserLaw users;
  PowerParams power;        // noise vectors sized N and K
  double gw_budget_w = 0.0;   // per feeder link
  double sat_budget_w = 0.0;  // per satellite antenna
  AlgoParams algo;

  int num_feeds() const { return feeder.num_feeds(); }          // L
  int num_subcarriers() const { return feeder.num_subcarriers(); }  // S
  int num_fl() const { return num_feeds() * num_subcarriers(); }    // N = S*L
  int num_users() const { return static_cast<int>(users.user_positions.size()); }

  void validate() const;
};

/// One channel draw for a scenario.
struct Realization {
  FeederChannel feeder;
  UserChannel user;
};

/// The stock two-gateway, ten-beam scenario used throughout the benchmarks.
Scenario default_table1_scenario();

/// Parse and validate a JSON scenario document. Unknown keys are rejected;
/// dB-denominated keys are converted to linear exactly once at load time.
/// Throws std::runtime_error with a descriptive message on any failure.
Scenario load_scenario(const std::string& text);

/// Canonical JSON serialization (linear units); load_scenario(serialize_
/// scenario(s)) reproduces s bit-exactly.
std::string serialize_scenario(const Scenario& s);

/// FNV-1a hash of the canonical serialization.
std::uint64_t scenario_hash(const Scenario& s);

/// Draw the feeder and user channels deterministically from
/// (scenario.seed, seed_offset).
Realization realize(const Scenario& s, std::uint64_t seed_offset);

}  // namespace satee
