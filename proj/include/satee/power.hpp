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

namespace satee {

/// Relative numeric-zero threshold for activity counts: a feeder power or
/// matching entry counts as zero when below this fraction of the largest
/// same-kind magnitude in the instance.
inline constexpr double kZeroThresholdRel = 1e-9;

struct PowerParams {
  double gw_hw_power_w = 10.0;   // per active feeder link
  double sat_hw_power_w = 5.0;   // per active feeder link
  double rho_gw = 0.6;           // HPA efficiency at the gateways
  double rho_sa = 0.6;           // HPA efficiency at the satellite
  double delta_gw = 1.0;         // weighting of gateway power
  double delta_sa = 1.0;         // weighting of satellite power
  double baud_rate_hz = 250e6;
  Eigen::VectorXd noise_cov_sat; // N diagonal entries sigma_t^fd^2 in W
  Eigen::VectorXd noise_user;    // K entries sigma_u^dl^2 in W

  void validate() const;
};

/// Decision variables: precoding W (N x K complex) and matching/amplifying
/// B (N x N nonnegative real; row = beam, column = feeder stream).
struct DesignVariables {
  Eigen::MatrixXcd W;
  Eigen::MatrixXd B;
};

struct MetricsReport {
  Eigen::VectorXd sinr_per_user;
  double rate_total_bps = 0.0;
  double p_gw_w = 0.0;
  double p_sat_w = 0.0;
  double p_total_weighted_w = 0.0;
  double swee_bits_per_joule = 0.0;
  int active_fl_count = 0;
  bool sat_power_clamped = false;
};

/// SINR of user u for the candidate design.
double sinr(int u, const DesignVariables& vars, const Eigen::MatrixXcd& F,
            const Eigen::MatrixXcd& H, const PowerParams& power);

Eigen::VectorXd sinr_all(const DesignVariables& vars, const Eigen::MatrixXcd& F,
                         const Eigen::MatrixXcd& H, const PowerParams& power);

/// Transmit power on feeder link t: sum_u |W[t,u]|^2.
double gw_feeder_power(int t, const Eigen::MatrixXcd& W);

/// Number of active feeder links (relative numeric-zero threshold).
int active_fl_count(const Eigen::MatrixXcd& W);

double gw_power(const Eigen::MatrixXcd& W, const PowerParams& power);

/// Satellite power; clamped at zero (the formula can go slightly negative
/// for small ||B||). Sets *clamped when the clamp fires.
double satellite_power(const DesignVariables& vars, const Eigen::MatrixXcd& F,
                       const PowerParams& power, bool* clamped = nullptr);

double total_weighted_power(const DesignVariables& vars, const Eigen::MatrixXcd& F,
                            const PowerParams& power, bool* clamped = nullptr);

/// Total rate in bits/s (Shannon bound, baud rate R_s).
double rate_total(const DesignVariables& vars, const Eigen::MatrixXcd& F,
                  const Eigen::MatrixXcd& H, const PowerParams& power);

/// System weighted energy efficiency in bits/Joule. Throws on zero total power.
double swee(const DesignVariables& vars, const Eigen::MatrixXcd& F,
            const Eigen::MatrixXcd& H, const PowerParams& power);

MetricsReport evaluate_metrics(const DesignVariables& vars, const Eigen::MatrixXcd& F,
                               const Eigen::MatrixXcd& H, const PowerParams& power);

}  // namespace satee
