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

#include "satee/scenario.hpp"

#include <json.hpp>

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "satee/rng.hpp"

namespace satee {

using json = nlohmann::ordered_json;

void AlgoParams::validate() const {
  if (!(tol_out > 0.0)) throw std::invalid_argument("algo.tol_out must be positive");
  if (max_outer < 1) throw std::invalid_argument("algo.max_outer must be >= 1");
  if (!(tol_inner > 0.0)) throw std::invalid_argument("algo.tol_inner must be positive");
  if (max_inner < 1) throw std::invalid_argument("algo.max_inner must be >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("algo.epsilon must be positive");
  if (!(qcqp_tol > 0.0)) throw std::invalid_argument("algo.qcqp_tol must be positive");
  if (qcqp_max_iter < 1) throw std::invalid_argument("algo.qcqp_max_iter must be >= 1");
}

void ImpairmentLaw::validate() const {
  if (!(atm_amplitude_min > 0.0 && atm_amplitude_min <= 1.0))
    throw std::invalid_argument("impairments.atm_amplitude_min out of (0, 1]");
  if (!(phase_noise_max_deg >= 0.0 && phase_noise_max_deg <= 180.0))
    throw std::invalid_argument("impairments.phase_noise_max_deg out of [0, 180]");
}

void UserLaw::validate() const {
  if (user_positions.empty()) throw std::invalid_argument("users.positions empty");
  if (beam_centers.empty()) throw std::invalid_argument("users.beam_centers empty");
  for (const auto& p : user_positions) validate_ground_point(p);
  for (const auto& p : beam_centers) validate_ground_point(p);
  if (!(rician_factor >= 0.0)) throw std::invalid_argument("users.rician_factor must be >= 0");
  if (!(downlink_carrier_hz > 0.0))
    throw std::invalid_argument("users.downlink_carrier_hz must be positive");
  if (!(beam_3db_width_deg > 0.0))
    throw std::invalid_argument("users.beam_3db_width_deg must be positive");
}

void Scenario::validate() const {
  if (schema_version != 1) throw std::invalid_argument("unsupported schema_version");
  feeder.validate();
  impairments.validate();
  users.validate();
  const int n = num_fl();
  if (static_cast<int>(users.beam_centers.size()) != n) {
    std::ostringstream os;
    os << "beam count " << users.beam_centers.size()
       << " violates the N = S*L assumption (S*L = " << num_subcarriers() << "*"
       << num_feeds() << " = " << n << ")";
    throw std::invalid_argument(os.str());
  }
  if (power.noise_cov_sat.size() != n)
    throw std::invalid_argument("power noise_sat must have N entries");
  if (power.noise_user.size() != num_users())
    throw std::invalid_argument("power noise_user must have K entries");
  power.validate();
  if (!(gw_budget_w > 0.0 && std::isfinite(gw_budget_w)))
    throw std::invalid_argument("gateway budget must be finite and positive");
  if (!(sat_budget_w > 0.0 && std::isfinite(sat_budget_w)))
    throw std::invalid_argument("satellite budget must be finite and positive");
  algo.validate();
}

Scenario default_table1_scenario() {
  Scenario s;
  s.seed = 1;

  s.feeder.gw_positions = {{50.002461, 5.148105, 0.0},   // Redu
                           {49.692915, 6.327135, 0.0}};  // Betzdorf
  s.feeder.sat_longitude_deg = 13.0;
  s.feeder.rx_element_separation_m = 3.0;
  s.feeder.gw_antenna_diameter_m = 6.8;
  s.feeder.sat_rx_antenna_diameter_m = 1.4;
  s.feeder.misc_loss_db = 1.0;
  s.feeder.subcarrier_freqs_hz = {49.075e9, 49.325e9, 49.575e9, 49.825e9, 50.075e9};
  s.feeder.num_feeds_per_gw = 1;
  s.feeder.antenna_efficiency = 0.6;

  s.impairments.atm_amplitude_min = 0.9;
  s.impairments.phase_noise_max_deg = 10.0;

  // Ten beams on a 5 x 2 grid over central Europe; one user per beam center.
  s.users.beam_centers.clear();
  for (double lon : {0.0, 4.0, 8.0, 12.0, 16.0})
    for (double lat : {46.0, 50.0}) s.users.beam_centers.push_back({lat, lon, 0.0});
  s.users.user_positions = s.users.beam_centers;
  s.users.rician_factor = 10.0;  // 10 dB
  s.users.downlink_carrier_hz = 19.5e9;
  // 1.2 m professional terminal dish at 19.5 GHz with 60% efficiency.
  s.users.terminal_gain_dbi = 45.6;
  // 51.8 dBi peak is consistent with a 0.4 degree full 3 dB beamwidth
  // (0.2 degree half-angle) through the aperture relation G ~ 41253*eff/w^2.
  s.users.beam_peak_gain_dbi = 51.8;
  s.users.beam_3db_width_deg = 0.2;

  const int n = s.num_fl();
  const int k = s.num_users();
  s.power.gw_hw_power_w = 10.0;
  s.power.sat_hw_power_w = 5.0;
  s.power.rho_gw = 0.6;
  s.power.rho_sa = 0.6;
  s.power.delta_gw = 1.0;
  s.power.delta_sa = 1.0;
  s.power.baud_rate_hz = 250e6;
  s.power.noise_cov_sat = Eigen::VectorXd::Constant(n, db_to_linear(-121.3));
  s.power.noise_user = Eigen::VectorXd::Constant(k, db_to_linear(-118.6));

  s.gw_budget_w = db_to_linear(15.0);
  s.sat_budget_w = db_to_linear(5.0);

  s.validate();
  return s;
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error("scenario: " + msg); }

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
  if (!obj.is_object()) fail(where + " must be an object");
  for (const auto& [k, v] : obj.items()) {
    (void)v;
    if (!allowed.contains(k)) fail("unknown key '" + k + "' in " + where);
  }
}

const json& need(const json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail("missing required key '" + key + "' in " + where);
  return *it;
}

double need_num(const json& obj, const std::string& key, const std::string& where) {
  const json& v = need(obj, key, where);
  if (!v.is_number()) fail("key '" + key + "' in " + where + " must be a number");
  return v.get<double>();
}

int need_int(const json& obj, const std::string& key, const std::string& where) {
  const json& v = need(obj, key, where);
  if (!v.is_number_integer()) fail("key '" + key + "' in " + where + " must be an integer");
  return v.get<int>();
}

// Exactly one of a dB-valued or a linear-valued key; returns linear.
double alt_num(const json& obj, const std::string& db_key, const std::string& lin_key,
               const std::string& where, double db_factor = 1.0) {
  const bool has_db = obj.contains(db_key);
  const bool has_lin = obj.contains(lin_key);
  if (has_db == has_lin)
    fail("exactly one of '" + db_key + "' or '" + lin_key + "' required in " + where);
  if (has_lin) return need_num(obj, lin_key, where);
  return std::pow(10.0, need_num(obj, db_key, where) / (10.0 * db_factor)) * db_factor;
}

GroundPoint parse_point(const json& v, const std::string& where) {
  check_keys(v, {"lat_deg", "lon_deg", "alt_m"}, where);
  GroundPoint p;
  p.lat_deg = need_num(v, "lat_deg", where);
  p.lon_deg = need_num(v, "lon_deg", where);
  p.alt_m = v.contains("alt_m") ? need_num(v, "alt_m", where) : 0.0;
  return p;
}

std::vector<GroundPoint> parse_points(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) fail(where + " must be a non-empty array");
  std::vector<GroundPoint> out;
  for (const auto& e : v) out.push_back(parse_point(e, where + " entry"));
  return out;
}

json point_json(const GroundPoint& p) {
  return json{{"lat_deg", p.lat_deg}, {"lon_deg", p.lon_deg}, {"alt_m", p.alt_m}};
}

}  // namespace

Scenario load_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // nlohmann reports a byte offset; translate to line/column.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') { ++line; col = 1; } else { ++col; }
    }
    std::ostringstream os;
    os << "parse error at line " << line << ", column " << col << ": " << e.what();
    fail(os.str());
  }
  if (!doc.is_object()) fail("document root must be an object");
  check_keys(doc, {"schema_version", "seed", "feeder", "impairments", "users",
                   "power", "budgets", "weights", "algo"}, "document root");

  Scenario s;
  s.schema_version = need_int(doc, "schema_version", "document root");
  if (s.schema_version != 1) fail("unsupported schema_version (expected 1)");
  {
    const json& v = need(doc, "seed", "document root");
    if (!v.is_number_unsigned() && !v.is_number_integer()) fail("seed must be an integer");
    s.seed = v.get<std::uint64_t>();
  }

  const json& fd = need(doc, "feeder", "document root");
  check_keys(fd, {"gateways", "feeds_per_gateway", "sat_longitude_deg",
                  "rx_element_separation_m", "gw_antenna_diameter_m",
                  "sat_rx_antenna_diameter_m", "misc_loss_db", "subcarrier_freqs_ghz",
                  "subcarrier_freqs_hz", "antenna_efficiency"}, "feeder");
  s.feeder.gw_positions = parse_points(need(fd, "gateways", "feeder"), "feeder.gateways");
  s.feeder.num_feeds_per_gw = need_int(fd, "feeds_per_gateway", "feeder");
  s.feeder.sat_longitude_deg = need_num(fd, "sat_longitude_deg", "feeder");
  s.feeder.rx_element_separation_m = need_num(fd, "rx_element_separation_m", "feeder");
  s.feeder.gw_antenna_diameter_m = need_num(fd, "gw_antenna_diameter_m", "feeder");
  s.feeder.sat_rx_antenna_diameter_m = need_num(fd, "sat_rx_antenna_diameter_m", "feeder");
  s.feeder.misc_loss_db = need_num(fd, "misc_loss_db", "feeder");
  s.feeder.antenna_efficiency = need_num(fd, "antenna_efficiency", "feeder");
  {
    const bool ghz = fd.contains("subcarrier_freqs_ghz");
    const bool hz = fd.contains("subcarrier_freqs_hz");
    if (ghz == hz)
      fail("exactly one of 'subcarrier_freqs_ghz' or 'subcarrier_freqs_hz' required in feeder");
    const json& arr = ghz ? fd["subcarrier_freqs_ghz"] : fd["subcarrier_freqs_hz"];
    if (!arr.is_array() || arr.empty()) fail("feeder subcarrier list must be a non-empty array");
    s.feeder.subcarrier_freqs_hz.clear();
    for (const auto& e : arr) {
      if (!e.is_number()) fail("feeder subcarrier entries must be numbers");
      s.feeder.subcarrier_freqs_hz.push_back(e.get<double>() * (ghz ? 1e9 : 1.0));
    }
  }

  const json& im = need(doc, "impairments", "document root");
  check_keys(im, {"atm_amplitude_min", "phase_noise_max_deg"}, "impairments");
  s.impairments.atm_amplitude_min = need_num(im, "atm_amplitude_min", "impairments");
  s.impairments.phase_noise_max_deg = need_num(im, "phase_noise_max_deg", "impairments");

  const json& us = need(doc, "users", "document root");
  check_keys(us, {"positions", "beam_centers", "rician_factor_db", "rician_factor",
                  "downlink_carrier_ghz", "downlink_carrier_hz", "terminal_gain_dbi",
                  "beam_peak_gain_dbi", "beam_3db_width_deg"}, "users");
  s.users.user_positions = parse_points(need(us, "positions", "users"), "users.positions");
  s.users.beam_centers = parse_points(need(us, "beam_centers", "users"), "users.beam_centers");
  s.users.rician_factor = alt_num(us, "rician_factor_db", "rician_factor", "users");
  {
    const bool ghz = us.contains("downlink_carrier_ghz");
    const bool hz = us.contains("downlink_carrier_hz");
    if (ghz == hz)
      fail("exactly one of 'downlink_carrier_ghz' or 'downlink_carrier_hz' required in users");
    s.users.downlink_carrier_hz =
        ghz ? need_num(us, "downlink_carrier_ghz", "users") * 1e9
            : need_num(us, "downlink_carrier_hz", "users");
  }
  s.users.terminal_gain_dbi = need_num(us, "terminal_gain_dbi", "users");
  s.users.beam_peak_gain_dbi = need_num(us, "beam_peak_gain_dbi", "users");
  s.users.beam_3db_width_deg = need_num(us, "beam_3db_width_deg", "users");

  const int n = s.num_fl();
  const int k = s.num_users();

  const json& pw = need(doc, "power", "document root");
  check_keys(pw, {"gw_hw_power_w", "sat_hw_power_w", "rho_gw", "rho_sa", "baud_rate_mhz",
                  "baud_rate_hz", "noise_sat_dbw", "noise_sat_w", "noise_user_dbw",
                  "noise_user_w"}, "power");
  s.power.gw_hw_power_w = need_num(pw, "gw_hw_power_w", "power");
  s.power.sat_hw_power_w = need_num(pw, "sat_hw_power_w", "power");
  s.power.rho_gw = need_num(pw, "rho_gw", "power");
  s.power.rho_sa = need_num(pw, "rho_sa", "power");
  {
    const bool mhz = pw.contains("baud_rate_mhz");
    const bool hz = pw.contains("baud_rate_hz");
    if (mhz == hz)
      fail("exactly one of 'baud_rate_mhz' or 'baud_rate_hz' required in power");
    s.power.baud_rate_hz = mhz ? need_num(pw, "baud_rate_mhz", "power") * 1e6
                               : need_num(pw, "baud_rate_hz", "power");
  }
  s.power.noise_cov_sat =
      Eigen::VectorXd::Constant(n, alt_num(pw, "noise_sat_dbw", "noise_sat_w", "power"));
  s.power.noise_user =
      Eigen::VectorXd::Constant(k, alt_num(pw, "noise_user_dbw", "noise_user_w", "power"));

  const json& bg = need(doc, "budgets", "document root");
  check_keys(bg, {"gw_dbw", "gw_w", "sat_dbw", "sat_w"}, "budgets");
  s.gw_budget_w = alt_num(bg, "gw_dbw", "gw_w", "budgets");
  s.sat_budget_w = alt_num(bg, "sat_dbw", "sat_w", "budgets");

  const json& wt = need(doc, "weights", "document root");
  check_keys(wt, {"delta_gw", "delta_sa"}, "weights");
  s.power.delta_gw = need_num(wt, "delta_gw", "weights");
  s.power.delta_sa = need_num(wt, "delta_sa", "weights");

  if (doc.contains("algo")) {
    const json& al = doc["algo"];
    check_keys(al, {"tol_out", "max_outer", "tol_inner", "max_inner", "epsilon",
                    "qcqp_tol", "qcqp_max_iter"}, "algo");
    if (al.contains("tol_out")) s.algo.tol_out = need_num(al, "tol_out", "algo");
    if (al.contains("max_outer")) s.algo.max_outer = need_int(al, "max_outer", "algo");
    if (al.contains("tol_inner")) s.algo.tol_inner = need_num(al, "tol_inner", "algo");
    if (al.contains("max_inner")) s.algo.max_inner = need_int(al, "max_inner", "algo");
    if (al.contains("epsilon")) s.algo.epsilon = need_num(al, "epsilon", "algo");
    if (al.contains("qcqp_tol")) s.algo.qcqp_tol = need_num(al, "qcqp_tol", "algo");
    if (al.contains("qcqp_max_iter")) s.algo.qcqp_max_iter = need_int(al, "qcqp_max_iter", "algo");
  }

  try {
    s.validate();
  } catch (const std::exception& e) {
    fail(std::string("validation error: ") + e.what());
  }
  return s;
}

std::string serialize_scenario(const Scenario& s) {
  json doc;
  doc["schema_version"] = s.schema_version;
  doc["seed"] = s.seed;

  json fd;
  fd["gateways"] = json::array();
  for (const auto& p : s.feeder.gw_positions) fd["gateways"].push_back(point_json(p));
  fd["feeds_per_gateway"] = s.feeder.num_feeds_per_gw;
  fd["sat_longitude_deg"] = s.feeder.sat_longitude_deg;
  fd["rx_element_separation_m"] = s.feeder.rx_element_separation_m;
  fd["gw_antenna_diameter_m"] = s.feeder.gw_antenna_diameter_m;
  fd["sat_rx_antenna_diameter_m"] = s.feeder.sat_rx_antenna_diameter_m;
  fd["misc_loss_db"] = s.feeder.misc_loss_db;
  fd["subcarrier_freqs_hz"] = s.feeder.subcarrier_freqs_hz;
  fd["antenna_efficiency"] = s.feeder.antenna_efficiency;
  doc["feeder"] = fd;

  doc["impairments"] = json{{"atm_amplitude_min", s.impairments.atm_amplitude_min},
                            {"phase_noise_max_deg", s.impairments.phase_noise_max_deg}};

  json us;
  us["positions"] = json::array();
  for (const auto& p : s.users.user_positions) us["positions"].push_back(point_json(p));
  us["beam_centers"] = json::array();
  for (const auto& p : s.users.beam_centers) us["beam_centers"].push_back(point_json(p));
  us["rician_factor"] = s.users.rician_factor;
  us["downlink_carrier_hz"] = s.users.downlink_carrier_hz;
  us["terminal_gain_dbi"] = s.users.terminal_gain_dbi;
  us["beam_peak_gain_dbi"] = s.users.beam_peak_gain_dbi;
  us["beam_3db_width_deg"] = s.users.beam_3db_width_deg;
  doc["users"] = us;

  json pw;
  pw["gw_hw_power_w"] = s.power.gw_hw_power_w;
  pw["sat_hw_power_w"] = s.power.sat_hw_power_w;
  pw["rho_gw"] = s.power.rho_gw;
  pw["rho_sa"] = s.power.rho_sa;
  pw["baud_rate_hz"] = s.power.baud_rate_hz;
  pw["noise_sat_w"] = s.power.noise_cov_sat.size() ? s.power.noise_cov_sat(0) : 0.0;
  pw["noise_user_w"] = s.power.noise_user.size() ? s.power.noise_user(0) : 0.0;
  doc["power"] = pw;

  doc["budgets"] = json{{"gw_w", s.gw_budget_w}, {"sat_w", s.sat_budget_w}};
  doc["weights"] = json{{"delta_gw", s.power.delta_gw}, {"delta_sa", s.power.delta_sa}};
  doc["algo"] = json{{"tol_out", s.algo.tol_out},     {"max_outer", s.algo.max_outer},
                     {"tol_inner", s.algo.tol_inner}, {"max_inner", s.algo.max_inner},
                     {"epsilon", s.algo.epsilon},     {"qcqp_tol", s.algo.qcqp_tol},
                     {"qcqp_max_iter", s.algo.qcqp_max_iter}};
  return doc.dump(2) + "\n";
}

std::uint64_t scenario_hash(const Scenario& s) {
  const std::string text = serialize_scenario(s);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

Realization realize(const Scenario& s, std::uint64_t seed_offset) {
  const int L = s.num_feeds();
  const int S = s.num_subcarriers();
  const int N = s.num_fl();
  const int K = s.num_users();
  const double deg = std::numbers::pi / 180.0;
  const double phase_max = s.impairments.phase_noise_max_deg * deg;

  Realization r;
  {
    CounterRng rng_phase(s.seed, seed_offset, "fl_phase");
    CounterRng rng_amp(s.seed, seed_offset, "fl_atm_amp");
    CounterRng rng_atm(s.seed, seed_offset, "fl_atm_phase");
    // Atmospheric terms are per feed (amplitude) and per feed-subcarrier
    // (phase); the synchronization phase noise is independent per subcarrier.
    Eigen::VectorXd atm_amp(L);
    for (int l = 0; l < L; ++l)
      atm_amp(l) = rng_amp.uniform(s.impairments.atm_amplitude_min, 1.0);
    Eigen::MatrixXd atm_phase(L, S);
    for (int l = 0; l < L; ++l)
      for (int sc = 0; sc < S; ++sc)
        atm_phase(l, sc) = rng_atm.uniform(-std::numbers::pi, std::numbers::pi);
    std::vector<Eigen::MatrixXcd> blocks;
    for (int sc = 0; sc < S; ++sc) {
      FeederImpairments imp;
      imp.phase_noise.resize(L, L);
      for (int m = 0; m < L; ++m)
        for (int n = 0; n < L; ++n)
          imp.phase_noise(m, n) = rng_phase.uniform(-phase_max, phase_max);
      imp.atm_amplitude = atm_amp;
      imp.atm_phase = atm_phase;
      blocks.push_back(feeder_subcarrier_channel(sc, s.feeder, imp));
    }
    r.feeder = assemble_feeder_channel(blocks);
  }
  {
    UserLinkParams up;
    up.user_positions = s.users.user_positions;
    up.beam_centers = s.users.beam_centers;
    up.rician_factor = s.users.rician_factor;
    up.wavelength_m = s.feeder.speed_of_light / s.users.downlink_carrier_hz;
    up.user_rx_gain =
        db_to_linear(s.users.terminal_gain_dbi + s.users.beam_peak_gain_dbi);
    up.beam_3db_width_deg = s.users.beam_3db_width_deg;
    up.sat_longitude_deg = s.feeder.sat_longitude_deg;
    CounterRng rng_ph(s.seed, seed_offset, "ul_phase");
    CounterRng rng_nlos(s.seed, seed_offset, "ul_nlos");
    up.phase_noise.resize(N, K);
    up.nlos_fading.resize(N, K);
    for (int n = 0; n < N; ++n) {
      for (int u = 0; u < K; ++u) {
        up.phase_noise(n, u) = rng_ph.uniform(-phase_max, phase_max);
        up.nlos_fading(n, u) = rng_nlos.cnormal();
      }
    }
    r.user = build_user_channel(up);
  }
  return r;
}

}  // namespace satee
