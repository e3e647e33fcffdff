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

#include <array>
#include <string>
#include <vector>

#include "satee/scenario.hpp"
#include "satee/wmmse.hpp"

namespace satee {

enum class Algorithm { JPFBM, JPAF, Baseline };

std::string algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

/// One realized optimization instance.
struct ProblemData {
  Eigen::MatrixXcd F;  // N x N block-diagonal feeder channel
  Eigen::MatrixXcd H;  // N x K user channel
  PowerParams power;
  double gw_budget_w = 0.0;
  double sat_budget_w = 0.0;
  AlgoParams algo;

  int n_fl() const { return static_cast<int>(F.rows()); }
  int n_users() const { return static_cast<int>(H.cols()); }
};

ProblemData make_problem(const Scenario& s, const Realization& r);

/// Sum rate in nats per symbol: sum_u ln(1 + SINR_u).
double rate_nats(const DesignVariables& vars, const ProblemData& prob);

/// Result of one inner (fixed-eta) alternating solve.
struct InnerResult {
  DesignVariables vars;
  WmmseState state;
  /// Surrogate objective after every block update (receive coefficients,
  /// MSE weights, W, and B/xi where applicable), starting with the value at
  /// the initial point. Non-increasing by construction of the guarded steps.
  std::vector<double> block_objectives;
  std::vector<double> pass_objectives;  // objective at the end of each pass
  /// (rate_bps, weighted power W, swee bits/J) at the end of each pass.
  std::vector<std::array<double, 3>> pass_metrics;
  int iterations = 0;
  double final_objective = 0.0;
  std::vector<std::string> warnings;
};

/// Feasible starting point: matched-filter W scaled to 50% budget margin
/// and B proportional to b_template (scaled onto the satellite budget when
/// scale_b is set; left untouched otherwise).
DesignVariables initial_design(const ProblemData& prob,
                               const Eigen::MatrixXd& b_template, bool scale_b);

/// Alternating joint precoding and matching solve at fixed eta_hat.
InnerResult jpfbm_inner(const ProblemData& prob, double eta_hat,
                        const DesignVariables* warm = nullptr);

/// Alternating precoding and per-beam amplify-gain solve for a fixed binary
/// matching A.
InnerResult jpaf_inner(const ProblemData& prob, double eta_hat,
                       const Eigen::MatrixXd& A,
                       const DesignVariables* warm = nullptr);

/// Precoding-only solve with B held fixed (used by the baseline).
InnerResult precoding_only_inner(const ProblemData& prob, double eta_hat,
                                 const Eigen::MatrixXd& b_fixed,
                                 const DesignVariables* warm = nullptr);

/// Baseline matching (F^H F)^{-1/2}, realified by entry magnitudes. Sets
/// *regularized when a ridge was needed for a near-singular F^H F.
Eigen::MatrixXd baseline_matching(const Eigen::MatrixXcd& F,
                                  bool* regularized = nullptr);

/// Project a soft nonnegative B onto a one-entry-per-row-and-column support
/// using maximum-weight assignment on the entry magnitudes; entries below
/// the numeric-zero threshold are dropped first. Kept entries retain their
/// values.
Eigen::MatrixXd harden_matching(const Eigen::MatrixXd& b_soft);

struct TraceRow {
  int outer_iter = 0;
  int inner_iter = 0;
  double eta_hat = 0.0;
  double objective = 0.0;
  double rate_bps = 0.0;
  double power_w = 0.0;
  double swee = 0.0;
};

struct SolveReport {
  Algorithm algorithm = Algorithm::JPFBM;
  DesignVariables soft_vars;  // as produced by the alternating solve
  DesignVariables hard_vars;  // after hardening + gain/precoder polish
  MetricsReport soft_metrics;
  MetricsReport hard_metrics;
  std::vector<double> eta_history;  // eta_hat trace, starting at 0
  std::vector<double> chi_history;  // rate - eta * power at each outer solution
  std::vector<TraceRow> trace;
  int outer_iterations = 0;
  int total_inner_iterations = 0;
  bool converged = false;
  bool eta_monotone = true;   // within 1e-8 slack
  double final_eta_hat = 0.0;
  double max_c3_violation_rel = 0.0;  // on hard_vars
  double max_c4_violation_rel = 0.0;
  bool c1c2_exact = false;   // hard B has at most one entry per row/column
  bool lemma1_holds = false; // FL active in W iff matched in hard B
  double wall_time_s = 0.0;
  std::vector<std::string> warnings;
};

/// Full ratio maximization: eta^(0) = 0, inner solves with warm starts,
/// eta updates by rate/power, stop on |eta change| <= algo.tol_out.
SolveReport dinkelbach(const ProblemData& prob, Algorithm alg);

}  // namespace satee
