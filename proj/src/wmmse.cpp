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

#include "satee/wmmse.hpp"

#include <cmath>
#include <stdexcept>

namespace satee {

Eigen::VectorXd theta_all(const DesignVariables& vars, const Eigen::MatrixXcd& F,
                          const Eigen::MatrixXcd& H, const PowerParams& power) {
  const Eigen::Index K = vars.W.cols();
  Eigen::VectorXd theta(K);
  for (Eigen::Index u = 0; u < K; ++u) {
    const Eigen::RowVectorXcd hb = H.col(u).adjoint() * vars.B;
    const Eigen::RowVectorXcd g = hb * (F.adjoint() * vars.W);
    const double fwd_noise =
        (hb.array().abs2() * power.noise_cov_sat.transpose().array()).sum();
    theta(u) = g.squaredNorm() + fwd_noise + power.noise_user(u);
  }
  return theta;
}

Eigen::VectorXcd update_receive_coeffs(const DesignVariables& vars,
                                       const Eigen::MatrixXcd& F,
                                       const Eigen::MatrixXcd& H,
                                       const PowerParams& power) {
  const Eigen::Index K = vars.W.cols();
  const Eigen::VectorXd theta = theta_all(vars, F, H, power);
  Eigen::VectorXcd delta(K);
  for (Eigen::Index u = 0; u < K; ++u) {
    const std::complex<double> g =
        (H.col(u).adjoint() * vars.B * F.adjoint() * vars.W.col(u))(0);
    delta(u) = std::conj(g) / theta(u);
  }
  return delta;
}

WmmseState update_wmmse(const DesignVariables& vars, const Eigen::MatrixXcd& F,
                        const Eigen::MatrixXcd& H, const PowerParams& power) {
  const Eigen::Index K = vars.W.cols();
  WmmseState st;
  st.theta = theta_all(vars, F, H, power);
  st.delta.resize(K);
  st.omega.resize(K);
  st.mse.resize(K);
  for (Eigen::Index u = 0; u < K; ++u) {
    const std::complex<double> g =
        (H.col(u).adjoint() * vars.B * F.adjoint() * vars.W.col(u))(0);
    st.delta(u) = std::conj(g) / st.theta(u);
    const double e = 1.0 - std::norm(g) / st.theta(u);
    if (!(e > 0.0)) throw std::logic_error("wmmse: nonpositive MSE");
    st.mse(u) = e;
    st.omega(u) = 1.0 / e;
  }
  return st;
}

double mse_value(int u, std::complex<double> d, const DesignVariables& vars,
                 const Eigen::MatrixXcd& F, const Eigen::MatrixXcd& H,
                 const PowerParams& power) {
  const Eigen::VectorXd theta = theta_all(vars, F, H, power);
  const std::complex<double> g =
      (H.col(u).adjoint() * vars.B * F.adjoint() * vars.W.col(u))(0);
  return 1.0 + std::norm(d) * theta(u) - 2.0 * std::real(d * g);
}

NuCoefficients compute_nu(double eta_hat, const PowerParams& power) {
  if (!(eta_hat >= 0.0)) throw std::invalid_argument("eta_hat must be >= 0");
  NuCoefficients nu;
  nu.nu_hw = eta_hat * (power.delta_gw * power.gw_hw_power_w +
                        power.delta_sa * power.sat_hw_power_w);
  nu.nu1 = eta_hat * power.delta_gw * (power.rho_gw + 1.0) / power.rho_gw;
  nu.nu2 = eta_hat * power.delta_sa / power.rho_sa;
  nu.nu3 = eta_hat * power.delta_sa * (power.rho_sa + 1.0) / power.rho_sa;
  return nu;
}

Eigen::MatrixXcd compute_lambda(const Eigen::MatrixXcd& H, const WmmseState& state) {
  const Eigen::Index N = H.rows();
  const Eigen::Index K = H.cols();
  Eigen::MatrixXcd lambda = Eigen::MatrixXcd::Zero(N, N);
  for (Eigen::Index u = 0; u < K; ++u)
    lambda += state.omega(u) * std::norm(state.delta(u)) * H.col(u) *
              H.col(u).adjoint();
  return lambda;
}

double surrogate_objective(double eta_hat, const DesignVariables& vars,
                           const Eigen::MatrixXcd& F, const Eigen::MatrixXcd& H,
                           const PowerParams& power, const WmmseState& state) {
  double obj = eta_hat * total_weighted_power(vars, F, power);
  const Eigen::VectorXd theta = theta_all(vars, F, H, power);
  for (Eigen::Index u = 0; u < vars.W.cols(); ++u) {
    const std::complex<double> g =
        (H.col(u).adjoint() * vars.B * F.adjoint() * vars.W.col(u))(0);
    const double e = 1.0 + std::norm(state.delta(u)) * theta(u) -
                     2.0 * std::real(state.delta(u) * g);
    obj += state.omega(u) * e - std::log(state.omega(u));
  }
  return obj;
}

double smoothed_objective(double eta_hat, const DesignVariables& vars,
                          const Eigen::MatrixXcd& F, const Eigen::MatrixXcd& H,
                          const PowerParams& power, const WmmseState& state,
                          double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const Eigen::MatrixXcd fw = F.adjoint() * vars.W;
  const double amp_out =
      (vars.B * fw).squaredNorm() +
      (vars.B * power.noise_cov_sat.asDiagonal() * vars.B.transpose()).trace();
  const double amp_in = fw.squaredNorm() + power.noise_cov_sat.sum();
  const double hw_w = power.delta_gw * power.gw_hw_power_w +
                      power.delta_sa * power.sat_hw_power_w;
  const auto b2 = vars.B.array().square();
  const double cnt = (b2 / (b2 + epsilon)).sum();
  const double p_smooth =
      power.delta_gw * (power.rho_gw + 1.0) / power.rho_gw *
          vars.W.squaredNorm() +
      power.delta_sa * ((power.rho_sa + 1.0) / power.rho_sa * amp_out -
                        amp_in / power.rho_sa) +
      hw_w * cnt;

  double obj = eta_hat * p_smooth;
  const Eigen::VectorXd theta = theta_all(vars, F, H, power);
  for (Eigen::Index u = 0; u < vars.W.cols(); ++u) {
    const std::complex<double> g =
        (H.col(u).adjoint() * vars.B * F.adjoint() * vars.W.col(u))(0);
    const double e = 1.0 + std::norm(state.delta(u)) * theta(u) -
                     2.0 * std::real(state.delta(u) * g);
    obj += state.omega(u) * e - std::log(state.omega(u));
  }
  return obj;
}

PrecodingSubproblem assemble_precoding_subproblem(
    const Eigen::MatrixXd& B, const Eigen::MatrixXcd& F, const Eigen::MatrixXcd& H,
    const WmmseState& state, const NuCoefficients& nu, const PowerParams& power,
    double gw_budget_w, double sat_budget_w) {
  const Eigen::Index N = F.rows();
  const Eigen::Index K = H.cols();
  if (B.rows() != N || B.cols() != N || H.rows() != N)
    throw std::invalid_argument("precoding subproblem dimension mismatch");

  const Eigen::MatrixXcd lambda = compute_lambda(H, state);
  const Eigen::MatrixXcd m0 =
      nu.nu3 * Eigen::MatrixXcd::Identity(N, N) + lambda;
  Eigen::MatrixXcd pi = nu.nu1 * Eigen::MatrixXcd::Identity(N, N) -
                        nu.nu2 * F * F.adjoint() +
                        F * B.transpose() * m0 * B * F.adjoint();
  pi = (pi + pi.adjoint()) / 2.0;

  PrecodingSubproblem sp;
  pi = psd_floor(pi, &sp.pi_clamp);

  auto& p = sp.qcqp;
  p.P = Eigen::MatrixXcd::Zero(N * K, N * K);
  p.q = Eigen::VectorXcd::Zero(N * K);
  for (Eigen::Index u = 0; u < K; ++u) {
    p.P.block(u * N, u * N, N, N) = pi;
    p.q.segment(u * N, N) =
        state.omega(u) * std::conj(state.delta(u)) * F * B.transpose() * H.col(u);
  }

  // (C3): per-FL transmit power sum_u |W(t,u)|^2 <= gateway budget.
  for (Eigen::Index t = 0; t < N; ++t) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(N * K, N * K);
    for (Eigen::Index u = 0; u < K; ++u) a(u * N + t, u * N + t) = 1.0;
    p.constraint_mats.push_back(std::move(a));
    p.constraint_bounds.push_back(gw_budget_w);
  }
  // (C4): per-antenna forwarded power sum_t b_{n,t}^2 sum_u |f_t^H w_u|^2;
  // the noise contribution is a constant for fixed B and moves to the bound.
  for (Eigen::Index n = 0; n < N; ++n) {
    const Eigen::VectorXd b2 = B.row(n).transpose().array().square();
    const Eigen::MatrixXcd fb = F * b2.asDiagonal() * F.adjoint();
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(N * K, N * K);
    for (Eigen::Index u = 0; u < K; ++u) a.block(u * N, u * N, N, N) = fb;
    const double fwd_noise =
        (B.row(n).transpose().array().square() * power.noise_cov_sat.array()).sum();
    p.constraint_mats.push_back(std::move(a));
    p.constraint_bounds.push_back(
        std::max(sat_budget_w - fwd_noise, 1e-12 * sat_budget_w));
  }
  p.assume_psd = true;
  return sp;
}

Eigen::VectorXd gamma_coeffs(const Eigen::MatrixXcd& W, const Eigen::MatrixXcd& F,
                             const PowerParams& power) {
  return (F.adjoint() * W).rowwise().squaredNorm() + power.noise_cov_sat;
}

MatchingSubproblem assemble_matching_subproblem(
    const Eigen::MatrixXcd& W, const Eigen::MatrixXcd& F, const Eigen::MatrixXcd& H,
    const WmmseState& state, const NuCoefficients& nu, const PowerParams& power,
    const Eigen::MatrixXd& beta, double sat_budget_w, double scale,
    const Eigen::VectorXd& c1_bounds, const Eigen::VectorXd& c2_bounds) {
  const Eigen::Index N = F.rows();
  if (beta.rows() != N || beta.cols() != N)
    throw std::invalid_argument("beta must be N x N");
  if (!(scale > 0.0)) throw std::invalid_argument("scale must be positive");
  if (c1_bounds.size() != 0 && c1_bounds.size() != N)
    throw std::invalid_argument("c1_bounds must have N entries");
  if (c2_bounds.size() != 0 && c2_bounds.size() != N)
    throw std::invalid_argument("c2_bounds must have N entries");

  const Eigen::MatrixXcd m0 =
      nu.nu3 * Eigen::MatrixXcd::Identity(N, N) + compute_lambda(H, state);
  const Eigen::MatrixXcd c_mat = F.adjoint() * W * W.adjoint() * F;  // N x N

  MatchingSubproblem sp;
  sp.scale = scale;
  auto& p = sp.qcqp;
  const Eigen::Index n2 = N * N;
  p.P = Eigen::MatrixXd::Zero(n2, n2);
  // Rate-coupling blocks: block (r, t) carries Re(C(t, r) * M0); diagonal
  // blocks add the hardware reweighting and the amplified-noise coupling.
  for (Eigen::Index r = 0; r < N; ++r)
    for (Eigen::Index t = 0; t < N; ++t)
      p.P.block(r * N, t * N, N, N) = (c_mat(t, r) * m0).real();
  for (Eigen::Index t = 0; t < N; ++t) {
    p.P.block(t * N, t * N, N, N) += power.noise_cov_sat(t) * m0.real();
    p.P.block(t * N, t * N, N, N) +=
        (nu.nu_hw * beta.col(t).array().square()).matrix().asDiagonal();
  }

  // Linear part: q = f~/2 with [f~]_t(n) = 2 Re(sum_u omega_u conj(delta_u)
  // h_u(n) w_u^H f_t).
  Eigen::VectorXcd z(state.delta.size());
  for (Eigen::Index u = 0; u < z.size(); ++u)
    z(u) = state.omega(u) * std::conj(state.delta(u));
  const Eigen::MatrixXd q_mat = (H * z.asDiagonal() * W.adjoint() * F).real();
  p.q = Eigen::VectorXd::Zero(n2);
  for (Eigen::Index t = 0; t < N; ++t) p.q.segment(t * N, N) = q_mat.col(t);

  // (C~1) per FL t and (C~2) per beam n: reweighted sparsity surrogates.
  for (Eigen::Index t = 0; t < N; ++t) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n2, n2);
    a.diagonal().segment(t * N, N) = beta.col(t).array().square();
    p.constraint_mats.push_back(std::move(a));
    p.constraint_bounds.push_back(c1_bounds.size() ? c1_bounds(t) : 1.0);
  }
  for (Eigen::Index n = 0; n < N; ++n) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n2, n2);
    for (Eigen::Index t = 0; t < N; ++t)
      a(t * N + n, t * N + n) = beta(n, t) * beta(n, t);
    p.constraint_mats.push_back(std::move(a));
    p.constraint_bounds.push_back(c2_bounds.size() ? c2_bounds(n) : 1.0);
  }
  // (C~4) per beam n: forwarded power budget.
  const Eigen::VectorXd gamma = gamma_coeffs(W, F, power);
  for (Eigen::Index n = 0; n < N; ++n) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n2, n2);
    for (Eigen::Index t = 0; t < N; ++t) a(t * N + n, t * N + n) = gamma(t);
    p.constraint_mats.push_back(std::move(a));
    p.constraint_bounds.push_back(sat_budget_w);
  }

  // Rescale to b/scale coordinates.
  const double s2 = scale * scale;
  p.P *= s2;
  p.q *= scale;
  for (auto& a : p.constraint_mats) a *= s2;
  p.nonnegative = true;
  p.assume_psd = true;
  return sp;
}

AmplifySubproblem assemble_amplify_subproblem(
    const Eigen::MatrixXd& A, const Eigen::MatrixXcd& W, const Eigen::MatrixXcd& F,
    const Eigen::MatrixXcd& H, const WmmseState& state, const NuCoefficients& nu,
    const PowerParams& power, const Eigen::VectorXd& alpha, double sat_budget_w,
    double scale) {
  const Eigen::Index N = F.rows();
  if (A.rows() != N || A.cols() != N) throw std::invalid_argument("A must be N x N");
  if (alpha.size() != N) throw std::invalid_argument("alpha must have N entries");
  if (!(scale > 0.0)) throw std::invalid_argument("scale must be positive");

  AmplifySubproblem sp;
  sp.scale = scale;
  sp.fl_of_beam.assign(static_cast<size_t>(N), -1);
  std::vector<int> beam_of_fl(static_cast<size_t>(N), -1);
  for (Eigen::Index n = 0; n < N; ++n) {
    for (Eigen::Index t = 0; t < N; ++t) {
      const double a = A(n, t);
      if (a == 0.0) continue;
      if (a != 1.0) throw std::invalid_argument("A entries must be 0 or 1");
      if (sp.fl_of_beam[static_cast<size_t>(n)] >= 0)
        throw std::invalid_argument("matching A has a row with two entries (C2)");
      if (beam_of_fl[static_cast<size_t>(t)] >= 0)
        throw std::invalid_argument("matching A has a column with two entries (C1)");
      sp.fl_of_beam[static_cast<size_t>(n)] = static_cast<int>(t);
      beam_of_fl[static_cast<size_t>(t)] = static_cast<int>(n);
    }
  }

  const Eigen::MatrixXcd m0 =
      nu.nu3 * Eigen::MatrixXcd::Identity(N, N) + compute_lambda(H, state);
  const Eigen::MatrixXcd c_mat = F.adjoint() * W * W.adjoint() * F;
  Eigen::VectorXcd z(state.delta.size());
  for (Eigen::Index u = 0; u < z.size(); ++u)
    z(u) = state.omega(u) * std::conj(state.delta(u));
  const Eigen::MatrixXd q_mat = (H * z.asDiagonal() * W.adjoint() * F).real();
  const Eigen::VectorXd gamma = gamma_coeffs(W, F, power);

  auto& p = sp.qcqp;
  p.P = Eigen::MatrixXd::Zero(N, N);
  p.q = Eigen::VectorXd::Zero(N);
  for (Eigen::Index r = 0; r < N; ++r) {
    const int mr = beam_of_fl[static_cast<size_t>(r)];
    if (mr < 0) continue;
    for (Eigen::Index t = 0; t < N; ++t) {
      const int mt = beam_of_fl[static_cast<size_t>(t)];
      if (mt < 0) continue;
      p.P(mr, mt) += std::real(c_mat(t, r) * m0(mr, mt));
    }
    p.P(mr, mr) += power.noise_cov_sat(r) * std::real(m0(mr, mr));
    p.q(mr) += q_mat(mr, r);
  }
  p.P += (nu.nu_hw * alpha.array().square()).matrix().asDiagonal();

  // Per-beam forwarded-power budget: xi_n^2 * gamma_{matched FL} <= budget.
  for (Eigen::Index n = 0; n < N; ++n) {
    const int t = sp.fl_of_beam[static_cast<size_t>(n)];
    if (t < 0) continue;  // unmatched beams stay at zero (q(n) = 0)
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(N, N);
    a(n, n) = gamma(t);
    p.constraint_mats.push_back(std::move(a));
    p.constraint_bounds.push_back(sat_budget_w);
  }

  const double s2 = scale * scale;
  p.P *= s2;
  p.q *= scale;
  for (auto& a : p.constraint_mats) a *= s2;
  p.nonnegative = true;
  p.assume_psd = true;
  return sp;
}

}  // namespace satee
