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

#include "satee/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace satee {

namespace {
constexpr std::complex<double> kJ{0.0, 1.0};
}

void FeederGeometry::validate() const {
  if (gw_positions.empty()) throw std::invalid_argument("no gateway positions");
  for (const auto& p : gw_positions) validate_ground_point(p);
  if (subcarrier_freqs_hz.empty())
    throw std::invalid_argument("need at least one subcarrier frequency");
  double prev = 0.0;
  for (double f : subcarrier_freqs_hz) {
    if (!(f > 0.0)) throw std::invalid_argument("subcarrier frequency must be positive");
    if (!(f > prev)) throw std::invalid_argument("subcarrier frequencies must be strictly increasing");
    prev = f;
  }
  if (num_feeds_per_gw < 1) throw std::invalid_argument("num_feeds_per_gw < 1");
  if (!(antenna_efficiency > 0.0 && antenna_efficiency <= 1.0))
    throw std::invalid_argument("antenna efficiency out of (0, 1]");
  if (!(speed_of_light > 0.0)) throw std::invalid_argument("speed of light must be positive");
}

void FeederImpairments::validate(int L, int S) const {
  if (phase_noise.rows() != L || phase_noise.cols() != L)
    throw std::invalid_argument("phase_noise must be L x L");
  if (atm_amplitude.size() != L)
    throw std::invalid_argument("atm_amplitude must have L entries");
  if (atm_phase.rows() != L || atm_phase.cols() != S)
    throw std::invalid_argument("atm_phase must be L x S");
  for (int l = 0; l < L; ++l) {
    if (!(atm_amplitude(l) > 0.0 && atm_amplitude(l) <= 1.0))
      throw std::invalid_argument("atm_amplitude entries must be in (0, 1]");
  }
  const double pi = std::numbers::pi;
  if ((atm_phase.array().abs() > pi + 1e-12).any())
    throw std::invalid_argument("atm_phase entries must be in [-pi, pi]");
}

Eigen::MatrixXcd feeder_subcarrier_channel(int s, const FeederGeometry& geom,
                                           const FeederImpairments& imp) {
  geom.validate();
  const int L = geom.num_feeds();
  const int S = geom.num_subcarriers();
  if (s < 0 || s >= S) throw std::out_of_range("subcarrier index out of range");
  imp.validate(L, S);

  const double f = geom.subcarrier_freqs_hz[static_cast<size_t>(s)];
  const double lambda = geom.speed_of_light / f;
  const double g_gw = aperture_gain(geom.gw_antenna_diameter_m, lambda,
                                    geom.antenna_efficiency);
  const double g_sa = aperture_gain(geom.sat_rx_antenna_diameter_m, lambda,
                                    geom.antenna_efficiency);
  const double amp = std::sqrt(g_gw * g_sa * db_to_linear(-geom.misc_loss_db));

  // Satellite Rx elements offset along-track, centered on the GEO point.
  const Eigen::Vector3d sat_center = geo_sat_ecef(geom.sat_longitude_deg);
  const double lo = geom.sat_longitude_deg * std::numbers::pi / 180.0;
  const Eigen::Vector3d along_track{-std::sin(lo), std::cos(lo), 0.0};

  Eigen::MatrixXcd F(L, L);
  for (int m = 0; m < L; ++m) {  // satellite Rx element
    const Eigen::Vector3d elem =
        sat_center + (m - 0.5 * (L - 1)) * geom.rx_element_separation_m * along_track;
    for (int n = 0; n < L; ++n) {  // gateway feed
      const auto& gw = geom.gw_positions[static_cast<size_t>(n / geom.num_feeds_per_gw)];
      const double r = (ecef(gw) - elem).norm();
      if (!(r > 0.0)) throw std::domain_error("zero slant range in feeder geometry");
      const double psi = 4.0 * std::numbers::pi * f * r / geom.speed_of_light;
      F(m, n) = std::exp(-kJ * (psi + imp.phase_noise(m, n))) / psi;
    }
  }
  // Per-feed atmospheric impairment scales the gateway-feed columns.
  for (int n = 0; n < L; ++n) {
    const std::complex<double> a =
        imp.atm_amplitude(n) * std::exp(-kJ * imp.atm_phase(n, s));
    F.col(n) *= a;
  }
  return amp * F;
}

FeederChannel assemble_feeder_channel(const std::vector<Eigen::MatrixXcd>& blocks) {
  if (blocks.empty()) throw std::invalid_argument("no feeder blocks");
  const Eigen::Index L = blocks.front().rows();
  for (const auto& b : blocks) {
    if (b.rows() != L || b.cols() != L)
      throw std::invalid_argument("feeder blocks must all be square with equal size");
  }
  const Eigen::Index S = static_cast<Eigen::Index>(blocks.size());
  FeederChannel ch;
  ch.blocks = blocks;
  ch.assembled = Eigen::MatrixXcd::Zero(S * L, S * L);
  for (Eigen::Index s = 0; s < S; ++s)
    ch.assembled.block(s * L, s * L, L, L) = blocks[static_cast<size_t>(s)];
  return ch;
}

double beam_pattern_coefficient(const GroundPoint& beam_center,
                                const GroundPoint& user_pos,
                                double sat_longitude_deg,
                                double beam_3db_width_deg) {
  if (!(beam_3db_width_deg > 0.0))
    throw std::invalid_argument("beam width must be positive");
  const double theta_rad =
      angular_separation_from_sat(sat_longitude_deg, beam_center, user_pos);
  const double theta_deg = theta_rad * 180.0 / std::numbers::pi;
  const double x = theta_deg / beam_3db_width_deg;
  // Power gain 10^(-3 x^2 / 10); returned amplitude is its square root.
  return std::pow(10.0, -3.0 * x * x / 20.0);
}

void UserLinkParams::validate() const {
  if (user_positions.empty()) throw std::invalid_argument("no users");
  if (beam_centers.empty()) throw std::invalid_argument("no beam centers");
  for (const auto& p : user_positions) validate_ground_point(p);
  for (const auto& p : beam_centers) validate_ground_point(p);
  if (!(rician_factor >= 0.0)) throw std::invalid_argument("rician factor must be >= 0");
  if (!(wavelength_m > 0.0)) throw std::invalid_argument("wavelength must be positive");
  if (!(user_rx_gain > 0.0)) throw std::invalid_argument("user rx gain must be positive");
  const auto N = static_cast<Eigen::Index>(beam_centers.size());
  const auto K = static_cast<Eigen::Index>(user_positions.size());
  if (phase_noise.rows() != N || phase_noise.cols() != K)
    throw std::invalid_argument("phase_noise must be N x K");
  if (nlos_fading.rows() != N || nlos_fading.cols() != K)
    throw std::invalid_argument("nlos_fading must be N x K");
}

UserChannel build_user_channel(const UserLinkParams& params) {
  params.validate();
  const auto N = static_cast<Eigen::Index>(params.beam_centers.size());
  const auto K = static_cast<Eigen::Index>(params.user_positions.size());
  const double kappa = params.rician_factor;
  const double los_w = std::sqrt(kappa / (kappa + 1.0));
  const double nlos_w = std::sqrt(1.0 / (kappa + 1.0));

  UserChannel ch;
  ch.matrix.resize(N, K);
  for (Eigen::Index u = 0; u < K; ++u) {
    const auto& up = params.user_positions[static_cast<size_t>(u)];
    const double d = slant_range(up, params.sat_longitude_deg);
    if (!(d > 0.0)) throw std::domain_error("zero satellite-user distance");
    const double psi = 2.0 * std::numbers::pi * d / params.wavelength_m;
    const double amp = std::sqrt(params.user_rx_gain) / psi;
    for (Eigen::Index n = 0; n < N; ++n) {
      const double p = beam_pattern_coefficient(
          params.beam_centers[static_cast<size_t>(n)], up,
          params.sat_longitude_deg, params.beam_3db_width_deg);
      const std::complex<double> rot =
          std::exp(-kJ * (psi + params.phase_noise(n, u)));
      ch.matrix(n, u) =
          amp * rot * (los_w * p + nlos_w * params.nlos_fading(n, u));
    }
  }
  if (!ch.matrix.allFinite()) throw std::domain_error("user channel has non-finite entries");
  return ch;
}

}  // namespace satee
