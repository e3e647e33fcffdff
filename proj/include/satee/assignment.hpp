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
#include <limits>
#include <stdexcept>
#include <vector>

namespace satee {

/// Maximum-weight perfect matching on a square score matrix.
/// Returns perm with perm[col] = assigned row, i.e. the permutation that
/// maximizes sum_col score(perm[col], col). O(n^3) shortest augmenting
/// paths with dual potentials (Jonker-Volgenant style).
inline std::vector<int> max_weight_assignment(const Eigen::MatrixXd& score) {
  const int n = static_cast<int>(score.rows());
  if (score.cols() != n) throw std::invalid_argument("score matrix must be square");
  if (!score.allFinite()) throw std::invalid_argument("score matrix has non-finite entries");
  constexpr double inf = std::numeric_limits<double>::infinity();

  // Minimization on the negated scores, 1-based sentinel formulation.
  std::vector<double> u(static_cast<size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<size_t>(n) + 1, 0.0);
  std::vector<int> p(static_cast<size_t>(n) + 1, 0);    // p[col] = row matched to col
  std::vector<int> way(static_cast<size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<size_t>(n) + 1, inf);
    std::vector<char> used(static_cast<size_t>(n) + 1, 0);
    do {
      used[static_cast<size_t>(j0)] = 1;
      const int i0 = p[static_cast<size_t>(j0)];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<size_t>(j)]) continue;
        const double cur = -score(i0 - 1, j - 1) - u[static_cast<size_t>(i0)] -
                           v[static_cast<size_t>(j)];
        if (cur < minv[static_cast<size_t>(j)]) {
          minv[static_cast<size_t>(j)] = cur;
          way[static_cast<size_t>(j)] = j0;
        }
        if (minv[static_cast<size_t>(j)] < delta) {
          delta = minv[static_cast<size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<size_t>(j)]) {
          u[static_cast<size_t>(p[static_cast<size_t>(j)])] += delta;
          v[static_cast<size_t>(j)] -= delta;
        } else {
          minv[static_cast<size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<size_t>(j0)];
      p[static_cast<size_t>(j0)] = p[static_cast<size_t>(j1)];
      j0 = j1;
    } while (j0);
  }

  std::vector<int> perm(static_cast<size_t>(n), -1);
  for (int j = 1; j <= n; ++j) perm[static_cast<size_t>(j - 1)] = p[static_cast<size_t>(j)] - 1;
  return perm;
}

}  // namespace satee
