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

// Independent reference method for convex QCQPs, used only by tests as an
// oracle against the production solver. Deliberately different algorithm:
// a primal log-barrier interior-point method with damped Newton steps on
// the realified problem. Slow and simple on purpose.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

namespace satee_test {

/// Realified convex QCQP: minimize x^T P x - 2 q^T x subject to
/// x^T A_j x <= c_j, with P, A_j symmetric PSD and c_j > 0.
struct RealQcqp {
  Eigen::MatrixXd P;
  Eigen::VectorXd q;
  std::vector<Eigen::MatrixXd> A;
  std::vector<double> c;
};

/// Map a complex Hermitian form z^H M z to the real form [Re z; Im z]^T
/// R [Re z; Im z] with R = [[Re M, -Im M], [Im M, Re M]].
inline Eigen::MatrixXd realify(const Eigen::MatrixXcd& m) {
  const Eigen::Index n = m.rows();
  Eigen::MatrixXd r(2 * n, 2 * n);
  r.topLeftCorner(n, n) = m.real();
  r.topRightCorner(n, n) = -m.imag();
  r.bottomLeftCorner(n, n) = m.imag();
  r.bottomRightCorner(n, n) = m.real();
  return r;
}

inline Eigen::VectorXd realify(const Eigen::VectorXcd& v) {
  Eigen::VectorXd r(2 * v.size());
  r.head(v.size()) = v.real();
  r.tail(v.size()) = v.imag();
  return r;
}

/// Barrier interior-point solve. Starts at x = 0 (strictly feasible since
/// all c_j > 0) and follows the central path. Returns the primal minimizer.
inline Eigen::VectorXd barrier_solve(const RealQcqp& prob, double gap = 1e-10) {
  const Eigen::Index n = prob.P.rows();
  const int m = static_cast<int>(prob.A.size());
  Eigen::MatrixXd P = (prob.P + prob.P.transpose()) / 2.0;
  // Scale the objective so t is dimensionless.
  const double ps = std::max({P.cwiseAbs().maxCoeff(),
                              prob.q.size() ? prob.q.cwiseAbs().maxCoeff() : 0.0,
                              1e-300});
  P /= ps;
  const Eigen::VectorXd q = prob.q / ps;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);

  auto slack = [&](const Eigen::VectorXd& xx, int j) {
    return prob.c[static_cast<size_t>(j)] -
           xx.dot(prob.A[static_cast<size_t>(j)] * xx);
  };
  auto feasible = [&](const Eigen::VectorXd& xx) {
    for (int j = 0; j < m; ++j)
      if (slack(xx, j) <= 0.0) return false;
    return true;
  };
  auto phi = [&](const Eigen::VectorXd& xx, double t) {
    double v = t * (xx.dot(P * xx) - 2.0 * q.dot(xx));
    for (int j = 0; j < m; ++j) v -= std::log(slack(xx, j));
    return v;
  };

  const double t_final = m > 0 ? std::max(1.0, m / gap) : 1.0;
  for (double t = 1.0;; t *= 20.0) {
    // Damped Newton to high accuracy at this t.
    for (int it = 0; it < 200; ++it) {
      Eigen::VectorXd g = t * (2.0 * P * x - 2.0 * q);
      Eigen::MatrixXd h = 2.0 * t * P;
      for (int j = 0; j < m; ++j) {
        const double s = slack(x, j);
        const Eigen::VectorXd ax = prob.A[static_cast<size_t>(j)] * x;
        g += 2.0 * ax / s;
        h += 2.0 * prob.A[static_cast<size_t>(j)] / s + 4.0 * (ax * ax.transpose()) / (s * s);
      }
      h.diagonal().array() += 1e-12 * std::max(1.0, h.cwiseAbs().maxCoeff());
      const Eigen::VectorXd dx = -h.ldlt().solve(g);
      const double lambda2 = -g.dot(dx);
      if (!(lambda2 > 1e-18)) break;
      double step = 1.0;
      const double f0 = phi(x, t);
      Eigen::VectorXd xn = x + step * dx;
      for (int ls = 0; ls < 80; ++ls) {
        if (feasible(xn) && phi(xn, t) <= f0 - 0.25 * step * lambda2) break;
        step *= 0.5;
        xn = x + step * dx;
      }
      if (!feasible(xn)) break;
      x = xn;
      if (lambda2 < 1e-16) break;
    }
    if (m == 0 || t >= t_final) break;
  }
  return x;
}

inline double qcqp_objective(const RealQcqp& prob, const Eigen::VectorXd& x) {
  return x.dot(prob.P * x) - 2.0 * prob.q.dot(x);
}

}  // namespace satee_test
