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
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace satee {

inline constexpr double kEarthRadiusM = 6371e3;       // spherical Earth
inline constexpr double kGeoRadiusM = 42164e3;        // geocentric GEO radius
inline constexpr double kGeoAltitudeM = 35786e3;      // GEO altitude above equator

struct GroundPoint {
  double lat_deg = 0.0;
  double lon_deg = 0.0;
  double alt_m = 0.0;
};

inline void validate_ground_point(const GroundPoint& p) {
  if (!(std::abs(p.lat_deg) <= 90.0))
    throw std::invalid_argument("latitude out of [-90, 90]");
  if (!(p.lon_deg >= -180.0 && p.lon_deg <= 180.0))
    throw std::invalid_argument("longitude out of [-180, 180]");
}

/// ECEF position of a ground point on the spherical Earth model.
inline Eigen::Vector3d ecef(const GroundPoint& p) {
  const double la = p.lat_deg * std::numbers::pi / 180.0;
  const double lo = p.lon_deg * std::numbers::pi / 180.0;
  const double r = kEarthRadiusM + p.alt_m;
  return {r * std::cos(la) * std::cos(lo), r * std::cos(la) * std::sin(lo),
          r * std::sin(la)};
}

/// ECEF position of the GEO satellite at the given longitude (deg east).
inline Eigen::Vector3d geo_sat_ecef(double sat_longitude_deg) {
  const double lo = sat_longitude_deg * std::numbers::pi / 180.0;
  return {kGeoRadiusM * std::cos(lo), kGeoRadiusM * std::sin(lo), 0.0};
}

/// Euclidean distance in meters from a ground point to the GEO point.
inline double slant_range(const GroundPoint& p, double sat_longitude_deg) {
  validate_ground_point(p);
  return (ecef(p) - geo_sat_ecef(sat_longitude_deg)).norm();
}

/// Angle (radians) between two ground points as seen from the satellite.
inline double angular_separation_from_sat(double sat_longitude_deg,
                                          const GroundPoint& a,
                                          const GroundPoint& b) {
  const Eigen::Vector3d s = geo_sat_ecef(sat_longitude_deg);
  const Eigen::Vector3d da = (ecef(a) - s).normalized();
  const Eigen::Vector3d db = (ecef(b) - s).normalized();
  const double c = std::clamp(da.dot(db), -1.0, 1.0);
  return std::acos(c);
}

/// Parabolic-aperture antenna gain: eta * (pi * D / lambda)^2.
inline double aperture_gain(double diameter_m, double wavelength_m,
                            double efficiency) {
  const double x = std::numbers::pi * diameter_m / wavelength_m;
  return efficiency * x * x;
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

}  // namespace satee
