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

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "satee/geometry.hpp"

namespace satee {

/// Geometry and fixed parameters of the gateway-to-satellite feeder links.
///
/// The L feeder feeds are the per-gateway antennas listed gateway-major:
/// feed l belongs to gateway l / num_feeds_per_gw. The satellite carries L
/// receive elements spaced rx_element_separation_m apart along-track.
struct FeederGeometry {
  std::vector<GroundPoint> gw_positions;
  double sat_longitude_deg = 13.0;
  double rx_element_separation_m = 3.0;
  double gw_antenna_diameter_m = 6.8;
  double sat_rx_antenna_diameter_m = 1.4;
  double misc_loss_db = 1.0;
  std::vector<double> subcarrier_freqs_hz;  // S, strictly increasing
  int num_feeds_per_gw = 1;
  double speed_of_light = 299792458.0;
  double antenna_efficiency = 0.6;

  int num_feeds() const {
    return static_cast<int>(gw_positions.size()) * num_feeds_per_gw;
  }
  int num_subcarriers() const { return static_cast<int>(subcarrier_freqs_hz.size()); }

  void validate() const;
};

/// Per-realization feeder-link impairments.
struct FeederImpairments {
  Eigen::MatrixXd phase_noise;   // L x L, radians (per Rx element, per feed)
  Eigen::VectorXd atm_amplitude; // L, in (0, 1]
  Eigen::MatrixXd atm_phase;     // L x S, radians in [-pi, pi]

  void validate(int L, int S) const;
};

/// Block-diagonal feeder-link channel: one L x L block per subcarrier.
struct FeederChannel {
  std::vector<Eigen::MatrixXcd> blocks;  // S blocks of L x L
  Eigen::MatrixXcd assembled;            // N x N, N = S * L
};

/// One subcarrier's L x L feeder channel. Rows index satellite receive
/// elements, columns index gateway feeds; the per-feed atmospheric term
/// scales columns. s is zero-based.
Eigen::MatrixXcd feeder_subcarrier_channel(int s, const FeederGeometry& geom,
                                           const FeederImpairments& imp);

FeederChannel assemble_feeder_channel(const std::vector<Eigen::MatrixXcd>& blocks);

/// Gaussian-taper beam pattern amplitude; power gain is -3 dB at the 3 dB
/// half-width. Real-valued, in (0, 1], 1 at boresight.
double beam_pattern_coefficient(const GroundPoint& beam_center,
                                const GroundPoint& user_pos,
                                double sat_longitude_deg,
                                double beam_3db_width_deg);

/// Everything needed to evaluate the Rician user-link entries.
struct UserLinkParams {
  std::vector<GroundPoint> user_positions;  // K
  double rician_factor = 10.0;              // linear kappa >= 0
  double wavelength_m = 0.0;
  double user_rx_gain = 1.0;  // composite linear gain (terminal Rx x beam peak Tx)
  std::vector<GroundPoint> beam_centers;  // N
  double beam_3db_width_deg = 0.6;
  double sat_longitude_deg = 13.0;
  Eigen::MatrixXd phase_noise;    // N x K, radians
  Eigen::MatrixXcd nlos_fading;   // N x K, unit-variance complex

  void validate() const;
};

struct UserChannel {
  Eigen::MatrixXcd matrix;  // N x K, column u is h_u
};

UserChannel build_user_channel(const UserLinkParams& params);

}  // namespace satee
