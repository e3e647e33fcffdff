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

#include "satee/sweep.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#ifndef SATEE_GIT_REV
#define SATEE_GIT_REV "unknown"
#endif

namespace satee {

using json = nlohmann::ordered_json;

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string hash_hex(std::uint64_t h) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string join_unique(const std::vector<std::string>& msgs) {
  std::set<std::string> seen;
  std::string out;
  for (const auto& m : msgs) {
    if (!seen.insert(m).second) continue;
    if (!out.empty()) out += ';';
    out += m;
  }
  return out;
}

}  // namespace

std::string sweep_variable_name(SweepVariable v) {
  switch (v) {
    case SweepVariable::SatBudgetDbw: return "sat_budget_dbw";
    case SweepVariable::WeightSplit: return "weight_split";
    case SweepVariable::GwBudgetDbw: return "gw_budget_dbw";
  }
  throw std::logic_error("unknown sweep variable");
}

SweepVariable sweep_variable_from_name(const std::string& name) {
  if (name == "sat_budget_dbw") return SweepVariable::SatBudgetDbw;
  if (name == "weight_split") return SweepVariable::WeightSplit;
  if (name == "gw_budget_dbw") return SweepVariable::GwBudgetDbw;
  throw std::invalid_argument("unknown sweep variable '" + name + "'");
}

void SweepSpec::validate() const {
  if (grid.empty()) throw std::invalid_argument("sweep grid must be non-empty");
  if (algorithms.empty()) throw std::invalid_argument("sweep needs at least one algorithm");
  if (realizations < 1) throw std::invalid_argument("realizations must be >= 1");
  if (variable == SweepVariable::WeightSplit) {
    for (double v : grid) {
      // Grid values are delta_gw with delta_sa = 1 - delta_gw.
      if (!(v > 0.0 && v < 1.0))
        throw std::invalid_argument("weight_split grid values must lie in (0, 1)");
    }
  }
}

SweepSpec load_sweep_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("sweep spec: ") + e.what());
  }
  if (!doc.is_object()) throw std::runtime_error("sweep spec: root must be an object");
  static const std::set<std::string> allowed = {
      "schema_version", "variable", "grid", "algorithms", "realizations", "seed"};
  for (const auto& [k, v] : doc.items()) {
    (void)v;
    if (!allowed.contains(k))
      throw std::runtime_error("sweep spec: unknown key '" + k + "'");
  }
  if (!doc.contains("schema_version") || doc["schema_version"] != 1)
    throw std::runtime_error("sweep spec: schema_version 1 required");

  SweepSpec spec;
  spec.variable = sweep_variable_from_name(doc.at("variable").get<std::string>());
  for (const auto& v : doc.at("grid")) spec.grid.push_back(v.get<double>());
  for (const auto& a : doc.at("algorithms"))
    spec.algorithms.push_back(algorithm_from_name(a.get<std::string>()));
  if (doc.contains("realizations")) spec.realizations = doc["realizations"].get<int>();
  if (doc.contains("seed")) spec.seed = doc["seed"].get<std::uint64_t>();
  spec.validate();
  return spec;
}

Scenario apply_sweep_value(const Scenario& base, SweepVariable variable,
                           double value) {
  Scenario s = base;
  switch (variable) {
    case SweepVariable::SatBudgetDbw:
      s.sat_budget_w = db_to_linear(value);
      break;
    case SweepVariable::GwBudgetDbw:
      s.gw_budget_w = db_to_linear(value);
      break;
    case SweepVariable::WeightSplit:
      s.power.delta_gw = value;
      s.power.delta_sa = 1.0 - value;
      break;
  }
  s.validate();
  return s;
}

RunOutput run_single(const Scenario& s, Algorithm alg, std::uint64_t seed_offset) {
  const Realization r = realize(s, seed_offset);
  const ProblemData prob = make_problem(s, r);
  RunOutput out;
  out.report = dinkelbach(prob, alg);

  RunRecord& rec = out.record;
  rec.scenario_hash = scenario_hash(s);
  rec.algorithm = algorithm_name(alg);
  rec.realization = std::to_string(seed_offset);
  const MetricsReport& m = out.report.hard_metrics;
  rec.swee = m.swee_bits_per_joule;
  rec.rate_bps = m.rate_total_bps;
  rec.p_gw_w = m.p_gw_w;
  rec.p_sat_w = m.p_sat_w;
  rec.p_total_w = m.p_total_weighted_w;
  rec.swee_soft = out.report.soft_metrics.swee_bits_per_joule;
  rec.outer_iters = out.report.outer_iterations;
  rec.inner_iters = out.report.total_inner_iterations;
  rec.min_c3_slack_rel = -out.report.max_c3_violation_rel;
  rec.min_c4_slack_rel = -out.report.max_c4_violation_rel;
  rec.wall_time_s = out.report.wall_time_s;
  rec.warnings = join_unique(out.report.warnings);
  return out;
}

std::string trace_csv(const SolveReport& report) {
  std::string out = "outer_iter,inner_iter,eta,objective,rate,power,swee\n";
  for (const auto& row : report.trace) {
    out += std::to_string(row.outer_iter) + ',' + std::to_string(row.inner_iter) +
           ',' + fmt(row.eta_hat) + ',' + fmt(row.objective) + ',' +
           fmt(row.rate_bps) + ',' + fmt(row.power_w) + ',' + fmt(row.swee) + '\n';
  }
  return out;
}

std::string results_csv(const std::vector<RunRecord>& records) {
  std::string out =
      "scenario_hash,algorithm,sweep_variable,sweep_value,realization,status,"
      "swee,rate_bps,p_gw_w,p_sat_w,p_total_w,swee_soft,outer_iters,"
      "inner_iters,min_c3_slack_rel,min_c4_slack_rel,warnings\n";
  for (const auto& r : records) {
    out += hash_hex(r.scenario_hash) + ',' + r.algorithm + ',' + r.sweep_variable +
           ',' + fmt(r.sweep_value) + ',' + r.realization + ',' + r.status + ',' +
           fmt(r.swee) + ',' + fmt(r.rate_bps) + ',' + fmt(r.p_gw_w) + ',' +
           fmt(r.p_sat_w) + ',' + fmt(r.p_total_w) + ',' + fmt(r.swee_soft) +
           ',' + std::to_string(r.outer_iters) + ',' +
           std::to_string(r.inner_iters) + ',' + fmt(r.min_c3_slack_rel) + ',' +
           fmt(r.min_c4_slack_rel) + ',' + r.warnings + '\n';
  }
  return out;
}

std::string csv_timestamp_line() {
  const std::time_t now = std::time(nullptr);
  char buf[64];
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return std::string("# satee-csv v1 generated ") + buf + "\n";
}

SweepResult run_sweep(const SweepSpec& spec, const Scenario& base, int workers) {
  spec.validate();
  struct Task {
    size_t gi, ai;
    int realization;
  };
  std::vector<Task> tasks;
  for (size_t gi = 0; gi < spec.grid.size(); ++gi)
    for (size_t ai = 0; ai < spec.algorithms.size(); ++ai)
      for (int r = 0; r < spec.realizations; ++r) tasks.push_back({gi, ai, r});

  std::vector<RunRecord> rows(tasks.size());
  std::atomic<size_t> next{0};
  auto worker_fn = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& t = tasks[i];
      RunRecord& rec = rows[i];
      rec.algorithm = algorithm_name(spec.algorithms[t.ai]);
      rec.sweep_variable = sweep_variable_name(spec.variable);
      rec.sweep_value = spec.grid[t.gi];
      rec.realization = std::to_string(t.realization);
      try {
        Scenario sc = apply_sweep_value(base, spec.variable, spec.grid[t.gi]);
        sc.seed = spec.seed;
        RunOutput ro = run_single(sc, spec.algorithms[t.ai],
                                  static_cast<std::uint64_t>(t.realization));
        ro.record.sweep_variable = rec.sweep_variable;
        ro.record.sweep_value = rec.sweep_value;
        rec = std::move(ro.record);
      } catch (const std::exception& e) {
        rec.status = std::string("error: ") + e.what();
      }
    }
  };
  const int nw = std::max(1, workers);
  std::vector<std::thread> pool;
  for (int i = 1; i < nw; ++i) pool.emplace_back(worker_fn);
  worker_fn();
  for (auto& th : pool) th.join();

  SweepResult result;
  result.records = rows;
  for (const auto& r : rows)
    if (r.status != "ok") result.any_failed = true;

  // Aggregate rows per (grid value, algorithm), means over successful runs.
  for (size_t gi = 0; gi < spec.grid.size(); ++gi) {
    for (size_t ai = 0; ai < spec.algorithms.size(); ++ai) {
      RunRecord mean;
      mean.algorithm = algorithm_name(spec.algorithms[ai]);
      mean.sweep_variable = sweep_variable_name(spec.variable);
      mean.sweep_value = spec.grid[gi];
      mean.realization = "mean";
      int n_ok = 0, n_all = 0;
      double min_c3 = 0.0, min_c4 = 0.0;
      bool first = true;
      for (const auto& r : rows) {
        if (r.sweep_value != spec.grid[gi] ||
            r.algorithm != mean.algorithm || r.realization == "mean")
          continue;
        ++n_all;
        if (r.status != "ok") continue;
        ++n_ok;
        mean.scenario_hash = r.scenario_hash;
        mean.swee += r.swee;
        mean.rate_bps += r.rate_bps;
        mean.p_gw_w += r.p_gw_w;
        mean.p_sat_w += r.p_sat_w;
        mean.p_total_w += r.p_total_w;
        mean.swee_soft += r.swee_soft;
        mean.outer_iters += r.outer_iters;
        mean.inner_iters += r.inner_iters;
        if (first || r.min_c3_slack_rel < min_c3) min_c3 = r.min_c3_slack_rel;
        if (first || r.min_c4_slack_rel < min_c4) min_c4 = r.min_c4_slack_rel;
        first = false;
      }
      if (n_ok > 0) {
        mean.swee /= n_ok;
        mean.rate_bps /= n_ok;
        mean.p_gw_w /= n_ok;
        mean.p_sat_w /= n_ok;
        mean.p_total_w /= n_ok;
        mean.swee_soft /= n_ok;
        mean.outer_iters /= n_ok;
        mean.inner_iters /= n_ok;
        mean.min_c3_slack_rel = min_c3;
        mean.min_c4_slack_rel = min_c4;
      }
      mean.status = (n_ok == n_all) ? "ok" : (n_ok > 0 ? "partial" : "failed");
      result.records.push_back(std::move(mean));
    }
  }
  return result;
}

std::string manifest_json(const Scenario& s, std::uint64_t seed,
                          const std::string& command, int record_count) {
  json doc;
  doc["schema_version"] = 1;
  doc["tool"] = "satee_bench";
  doc["command"] = command;
  doc["scenario_hash"] = hash_hex(scenario_hash(s));
  doc["seed"] = seed;
  doc["git_revision"] = SATEE_GIT_REV;
  {
    const std::time_t now = std::time(nullptr);
    char buf[64];
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    doc["timestamp"] = buf;
  }
  doc["record_count"] = record_count;
  return doc.dump(2) + "\n";
}

}  // namespace satee
