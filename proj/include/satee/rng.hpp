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

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace satee {

/// Counter-based deterministic random stream.
///
/// Each stream is keyed by (seed, stream index, tag); draws are a pure
/// function of the key and a running counter, so results are identical
/// across platforms and independent of call interleaving in other streams.
/// The generator is a splitmix64 chain over the mixed key.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream, std::string_view tag)
      : key_(mix(mix(mix(seed) ^ (stream * 0x9E3779B97F4A7C15ULL)) ^ fnv1a(tag))) {}

  /// Uniform in [0, 1).
  double uniform() {
    // 53-bit mantissa from the top bits.
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (platform-independent, unlike
  /// std::normal_distribution).
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  /// Circularly-symmetric complex normal with unit variance (E|z|^2 = 1).
  std::complex<double> cnormal() {
    const double s = std::numbers::sqrt2 / 2.0;
    return {s * normal(), s * normal()};
  }

 private:
  static constexpr std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : s) {
      h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
      h *= 0x100000001B3ULL;
    }
    return h;
  }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(key_ ^ state_);
  }

  std::uint64_t key_;
  std::uint64_t state_ = 0;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace satee
