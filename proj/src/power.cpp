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

#include "satee/power.hpp"

#include <cmath>
#include <stdexcept>

namespace satee {

void PowerParams::validate() const {
  if (!(rho_gw > 0.0 && rho_gw <= 1.0)) throw std::invalid_argument("rho_gw out of (0, 1]");
  if (!(rho_sa > 0.0 && rho_sa <= 1.0)) throw std::invalid_argument("rho_sa out of (0, 1]");
  if (!(delta_gw >= 0.0 && delta_sa >= 0.0 && delta_gw + delta_sa > 0.0))
    throw std::invalid_argument("power weights must be nonnegative with positive sum");
  if (!(baud_rate_hz > 0.0)) throw std::invalid_argument("baud rate must be positive");
  if ((noise_cov_sat.array() <= 0.0).any())
    throw std::invalid_argument("satellite noise powers must be positive");
  if ((noise_user.array() <= 0.0).any())
    throw std::invalid_argument("user noise powers must be positive");
}

double sinr(int u, const DesignVariables& vars, const Eigen::MatrixXcd& F,
            const Eigen::MatrixXcd& H, const PowerParams& power) {
  const Eigen::Index K = vars.W.cols();
  if (u < 0 || u >= K) throw std::out_of_range("user index");
  // g_i = h_u^H B F^H w_i for all i.
  const Eigen::RowVectorXcd hu_bf = H.col(u).adjoint() * vars.B * F.adjoint();
  const Eigen::RowVectorXcd g = hu_bf * vars.W;
  const double sig = std::norm(g(u));
  double interf = 0.0;
  for (Eigen::Index i = 0; i < K; ++i)
    if (i != u) interf += std::norm(g(i));
  const Eigen::RowVectorXcd hb = H.col(u).adjoint() * vars.B;
  const double fwd_noise =
      (hb.array().abs2() * power.noise_cov_sat.transpose().array()).sum();
  return sig / (interf + fwd_noise + power.noise_user(u));
}

Eigen::VectorXd sinr_all(const DesignVariables& vars, const Eigen::MatrixXcd& F,
                         const Eigen::MatrixXcd& H, const PowerParams& power) {
  Eigen::VectorXd out(vars.W.cols());
  for (int u = 0; u < vars.W.cols(); ++u) out(u) = sinr(u, vars, F, H, power);
  return out;
}

double gw_feeder_power(int t, const Eigen::MatrixXcd& W) {
  if (t < 0 || t >= W.rows()) throw std::out_of_range("feeder link index");
  return W.row(t).squaredNorm();
}

int active_fl_count(const Eigen::MatrixXcd& W) {
  const Eigen::VectorXd p = W.rowwise().squaredNorm();
  const double thr = kZeroThresholdRel * p.maxCoeff();
  return static_cast<int>((p.array() > thr).count());
}

double gw_power(const Eigen::MatrixXcd& W, const PowerParams& power) {
  const double tx = W.squaredNorm();
  if (tx == 0.0) return 0.0;
  return power.gw_hw_power_w * active_fl_count(W) +
         (power.rho_gw + 1.0) / power.rho_gw * tx;
}

double satellite_power(const DesignVariables& vars, const Eigen::MatrixXcd& F,
                       const PowerParams& power, bool* clamped) {
  const Eigen::MatrixXcd BFw = vars.B * (F.adjoint() * vars.W);
  const double amp_out = BFw.squaredNorm() +
                         (vars.B * power.noise_cov_sat.asDiagonal() * vars.B.transpose())
                             .trace();
  const double amp_in =
      (F.adjoint() * vars.W).squaredNorm() + power.noise_cov_sat.sum();
  const int t_fd = vars.W.squaredNorm() > 0.0 ? active_fl_count(vars.W) : 0;
  const double raw = power.sat_hw_power_w * t_fd +
                     (power.rho_sa + 1.0) / power.rho_sa * amp_out -
                     amp_in / power.rho_sa;
  if (raw < 0.0) {
    if (clamped) *clamped = true;
    return 0.0;
  }
  return raw;
}

double total_weighted_power(const DesignVariables& vars, const Eigen::MatrixXcd& F,
                            const PowerParams& power, bool* clamped) {
  return power.delta_gw * gw_power(vars.W, power) +
         power.delta_sa * satellite_power(vars, F, power, clamped);
}

double rate_total(const DesignVariables& vars, const Eigen::MatrixXcd& F,
                  const Eigen::MatrixXcd& H, const PowerParams& power) {
  const Eigen::VectorXd g = sinr_all(vars, F, H, power);
  return power.baud_rate_hz * (g.array() + 1.0).log2().sum();
}

double swee(const DesignVariables& vars, const Eigen::MatrixXcd& F,
            const Eigen::MatrixXcd& H, const PowerParams& power) {
  const double p = total_weighted_power(vars, F, power);
  if (!(p > 0.0)) throw std::domain_error("total weighted power is zero; SWEE undefined");
  return rate_total(vars, F, H, power) / p;
}

MetricsReport evaluate_metrics(const DesignVariables& vars, const Eigen::MatrixXcd& F,
                               const Eigen::MatrixXcd& H, const PowerParams& power) {
  MetricsReport r;
  r.sinr_per_user = sinr_all(vars, F, H, power);
  r.rate_total_bps =
      power.baud_rate_hz * (r.sinr_per_user.array() + 1.0).log2().sum();
  r.p_gw_w = gw_power(vars.W, power);
  r.p_sat_w = satellite_power(vars, F, power, &r.sat_power_clamped);
  r.p_total_weighted_w = power.delta_gw * r.p_gw_w + power.delta_sa * r.p_sat_w;
  r.active_fl_count = vars.W.squaredNorm() > 0.0 ? active_fl_count(vars.W) : 0;
  r.swee_bits_per_joule =
      r.p_total_weighted_w > 0.0 ? r.rate_total_bps / r.p_total_weighted_w : 0.0;
  return r;
}

}  // namespace satee
