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

#include "satee/power.hpp"
#include "satee/qcqp.hpp"

namespace satee {

/// Receive coefficients and MSE weights of the weighted-MMSE reformulation.
struct WmmseState {
  Eigen::VectorXcd delta;  // K receive coefficients
  Eigen::VectorXd omega;   // K MSE weights, = 1/e_u >= 1
  Eigen::VectorXd theta;   // K received-energy scalars
  Eigen::VectorXd mse;     // K MSE values e_u in (0, 1]
};

/// Theta_u = sum_i |h_u^H B F^H w_i|^2 + h_u^H B Sigma B^T h_u + sigma_u^2.
Eigen::VectorXd theta_all(const DesignVariables& vars, const Eigen::MatrixXcd& F,
                          const Eigen::MatrixXcd& H, const PowerParams& power);

/// Optimal receive coefficients delta_u = Theta_u^{-1} w_u^H F B^T h_u.
Eigen::VectorXcd update_receive_coeffs(const DesignVariables& vars,
                                       const Eigen::MatrixXcd& F,
                                       const Eigen::MatrixXcd& H,
                                       const PowerParams& power);

/// Full delta/omega refresh; omega_u = 1/e_u.
WmmseState update_wmmse(const DesignVariables& vars, const Eigen::MatrixXcd& F,
                        const Eigen::MatrixXcd& H, const PowerParams& power);

/// MSE of user u at an arbitrary receive coefficient (not necessarily the
/// minimizer): e_u = 1 + |d|^2 Theta_u - 2 Re(d h_u^H B F^H w_u), minimized
/// at d = conj(h_u^H B F^H w_u) / Theta_u.
double mse_value(int u, std::complex<double> d, const DesignVariables& vars,
                 const Eigen::MatrixXcd& F, const Eigen::MatrixXcd& H,
                 const PowerParams& power);

/// Scalar weights of the eta-parameterized surrogate. eta_hat is the
/// Dinkelbach parameter of the symbol-rate-normalized ratio (nats per symbol
/// over weighted watts), so all four values are O(1) at convergence.
struct NuCoefficients {
  double nu_hw = 0.0;  // hardware-power weight
  double nu1 = 0.0;    // gateway transmit-power weight
  double nu2 = 0.0;    // satellite input-power credit
  double nu3 = 0.0;    // satellite amplified-power weight; = (rho_sa+1) nu2
};

NuCoefficients compute_nu(double eta_hat, const PowerParams& power);

/// Lambda = sum_u omega_u |delta_u|^2 h_u h_u^H (Hermitian PSD, N x N).
Eigen::MatrixXcd compute_lambda(const Eigen::MatrixXcd& H, const WmmseState& state);

/// Surrogate objective eta_hat * P_tot + sum_u (omega_u e_u - ln omega_u),
/// evaluated with the true hardware activity count. Non-increasing across
/// the alternating block updates.
double surrogate_objective(double eta_hat, const DesignVariables& vars,
                           const Eigen::MatrixXcd& F, const Eigen::MatrixXcd& H,
                           const PowerParams& power, const WmmseState& state);

/// Smoothed surrogate objective: like surrogate_objective, but the
/// discontinuous hardware activity counts are replaced with the smooth
/// activity measure sum_{n,t} b_{n,t}^2 / (b_{n,t}^2 + epsilon), which the
/// reweighted quadratic beta^2 b^2 of the matching/amplify subproblems
/// matches in value at the reweighting point. epsilon must be scaled to the
/// square of the typical gain magnitude so the measure counts roughly one
/// unit per active entry. The alternating solver keeps this value
/// non-increasing through its descent guard.
double smoothed_objective(double eta_hat, const DesignVariables& vars,
                          const Eigen::MatrixXcd& F, const Eigen::MatrixXcd& H,
                          const PowerParams& power, const WmmseState& state,
                          double epsilon);

struct PrecodingSubproblem {
  QcqpProblem<std::complex<double>> qcqp;  // over x = vec(W), N*K complex
  double pi_clamp = 0.0;                   // spectrum clamp applied to Pi
};

/// Per-user decoupled QCQP over W for fixed B: objective
/// sum_u w_u^H Pi w_u - 2 Re(w_u^H k_u) with per-FL (C3) and per-antenna
/// (C4) power constraints.
PrecodingSubproblem assemble_precoding_subproblem(
    const Eigen::MatrixXd& B, const Eigen::MatrixXcd& F, const Eigen::MatrixXcd& H,
    const WmmseState& state, const NuCoefficients& nu, const PowerParams& power,
    double gw_budget_w, double sat_budget_w);

/// gamma_t = sum_u |f_t^H w_u|^2 + sigma_t^2 (per-FL forwarded-unit power).
Eigen::VectorXd gamma_coeffs(const Eigen::MatrixXcd& W, const Eigen::MatrixXcd& F,
                             const PowerParams& power);

struct MatchingSubproblem {
  QcqpProblem<double> qcqp;  // over b_scaled = vec(B)/scale, length N^2
  double scale = 1.0;
};

/// Reweighted QCQP over b = vec(B) (columns stacked) for fixed W, solved in
/// b/scale coordinates. Constraints: reweighted row/column sparsity
/// surrogates (C~1 per FL, C~2 per beam) and the per-antenna
/// forwarded-power budget (C~4); b >= 0 via the solver's nonnegative mode.
/// c1_bounds (per FL) and c2_bounds (per beam) default to 1 when empty; the
/// caller may relax them to keep a warm iterate feasible.
MatchingSubproblem assemble_matching_subproblem(
    const Eigen::MatrixXcd& W, const Eigen::MatrixXcd& F, const Eigen::MatrixXcd& H,
    const WmmseState& state, const NuCoefficients& nu, const PowerParams& power,
    const Eigen::MatrixXd& beta, double sat_budget_w, double scale,
    const Eigen::VectorXd& c1_bounds = Eigen::VectorXd(),
    const Eigen::VectorXd& c2_bounds = Eigen::VectorXd());

struct AmplifySubproblem {
  QcqpProblem<double> qcqp;  // over xi/scale, length N (per-beam gains)
  double scale = 1.0;
  std::vector<int> fl_of_beam;  // matched FL per beam, -1 if unmatched
};

/// QCQP over the per-beam amplify gains xi for a fixed binary matching A
/// (at most one entry per row and per column): B = diag(xi) A. Unmatched
/// beams are pinned to zero through a vanishing-budget constraint.
AmplifySubproblem assemble_amplify_subproblem(
    const Eigen::MatrixXd& A, const Eigen::MatrixXcd& W, const Eigen::MatrixXcd& F,
    const Eigen::MatrixXcd& H, const WmmseState& state, const NuCoefficients& nu,
    const PowerParams& power, const Eigen::VectorXd& alpha, double sat_budget_w,
    double scale);

}  // namespace satee
