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

#include "satee/optimizer.hpp"

namespace satee {

enum class SweepVariable { SatBudgetDbw, WeightSplit, GwBudgetDbw };

std::string sweep_variable_name(SweepVariable v);
SweepVariable sweep_variable_from_name(const std::string& name);

struct SweepSpec {
  SweepVariable variable = SweepVariable::SatBudgetDbw;
  std::vector<double> grid;
  std::vector<Algorithm> algorithms;
  int realizations = 1;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Parse a JSON sweep document (versioned schema, unknown keys rejected).
SweepSpec load_sweep_spec(const std::string& text);

/// Apply one sweep value to a scenario copy.
Scenario apply_sweep_value(const Scenario& base, SweepVariable variable,
                           double value);

struct RunRecord {
  std::uint64_t scenario_hash = 0;
  std::string algorithm;
  std::string sweep_variable = "none";
  double sweep_value = 0.0;
  std::string realization;  // seed offset, or "mean" for aggregate rows
  std::string status = "ok";
  double swee = 0.0;      // hardened solution, bits/J
  double rate_bps = 0.0;
  double p_gw_w = 0.0;
  double p_sat_w = 0.0;
  double p_total_w = 0.0; // delta-weighted
  double swee_soft = 0.0; // pre-hardening
  int outer_iters = 0;
  int inner_iters = 0;
  double min_c3_slack_rel = 0.0;  // min over FLs of (budget - used)/budget
  double min_c4_slack_rel = 0.0;
  double wall_time_s = 0.0;       // not serialized into the CSV body
  std::string warnings;
};

struct RunOutput {
  RunRecord record;
  SolveReport report;
};

/// One full solve of a scenario realization.
RunOutput run_single(const Scenario& s, Algorithm alg,
                     std::uint64_t seed_offset = 0);

/// Per-iteration trace CSV (header + rows); deterministic.
std::string trace_csv(const SolveReport& report);

/// Results CSV body (header + rows); deterministic given identical records.
std::string results_csv(const std::vector<RunRecord>& records);

/// Timestamped comment line to prepend to a CSV file.
std::string csv_timestamp_line();

struct SweepResult {
  std::vector<RunRecord> records;  // per-run rows then mean rows, fixed order
  bool any_failed = false;
};

/// Grid x algorithm x realization sweep on a worker pool. Failures are
/// recorded per-row and do not stop the sweep.
SweepResult run_sweep(const SweepSpec& spec, const Scenario& base, int workers);

/// Machine-readable provenance manifest (JSON).
std::string manifest_json(const Scenario& s, std::uint64_t seed,
                          const std::string& command, int record_count);

}  // namespace satee
