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
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

namespace satee {

enum class QcqpStatus { Optimal, MaxIter, Infeasible, IndefiniteObjective };

/// Convex QCQP: minimize x^H P x - 2 Re(q^H x) subject to x^H A_j x <= c_j
/// (and optionally x >= 0 elementwise for real problems).
template <typename Scalar>
struct QcqpProblem {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Mat P;
  Vec q;
  std::vector<Mat> constraint_mats;     // Hermitian PSD
  std::vector<double> constraint_bounds;  // strictly positive
  bool nonnegative = false;  // elementwise x >= 0; real problems only
  bool assume_psd = false;   // skip the definiteness check (caller guarantees)
};

template <typename Scalar>
struct QcqpSolution {
  using Vec = typename QcqpProblem<Scalar>::Vec;

  Vec x;
  double objective = 0.0;
  Eigen::VectorXd duals;
  QcqpStatus status = QcqpStatus::Optimal;
  double kkt_residual = std::numeric_limits<double>::infinity();
};

namespace detail {

inline double real_part(double v) { return v; }
inline double real_part(const std::complex<double>& v) { return v.real(); }

// Nonnegative least-distance inner solve: min x^T M x - 2 q^T x, x >= 0,
// M symmetric positive definite. Active-set iteration; exact zeros on the
// bound set. Returns the free-set mask.
inline Eigen::VectorXd nnls_solve(const Eigen::MatrixXd& M, const Eigen::VectorXd& q,
                                  std::vector<bool>& free_mask) {
  const Eigen::Index n = M.rows();
  free_mask.assign(static_cast<size_t>(n), false);
  std::vector<Eigen::Index> free;
  for (Eigen::Index i = 0; i < n; ++i)
    if (q(i) > 0.0) free.push_back(i);

  const double scale = std::max(M.cwiseAbs().maxCoeff(), 1e-300);
  const double xtol = 0.0;
  const double gtol = 1e-12 * std::max(q.cwiseAbs().maxCoeff(), scale);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  const int max_pass = static_cast<int>(12 * n + 20);
  for (int pass = 0; pass < max_pass; ++pass) {
    x.setZero();
    if (!free.empty()) {
      const auto nf = static_cast<Eigen::Index>(free.size());
      Eigen::MatrixXd Mf(nf, nf);
      Eigen::VectorXd qf(nf);
      for (Eigen::Index a = 0; a < nf; ++a) {
        qf(a) = q(free[static_cast<size_t>(a)]);
        for (Eigen::Index b = 0; b < nf; ++b)
          Mf(a, b) = M(free[static_cast<size_t>(a)], free[static_cast<size_t>(b)]);
      }
      const Eigen::VectorXd xf = Mf.ldlt().solve(qf);
      // Drop the most negative free variable, if any.
      Eigen::Index worst = -1;
      double worst_val = xtol;
      for (Eigen::Index a = 0; a < nf; ++a) {
        if (xf(a) < worst_val) {
          worst_val = xf(a);
          worst = a;
        }
      }
      if (worst >= 0) {
        free.erase(free.begin() + worst);
        continue;
      }
      for (Eigen::Index a = 0; a < nf; ++a) x(free[static_cast<size_t>(a)]) = xf(a);
    }
    // KKT check on bound variables: gradient must be nonnegative.
    const Eigen::VectorXd g = M * x - q;
    Eigen::Index add = -1;
    double add_val = -gtol;
    for (Eigen::Index i = 0; i < n; ++i) {
      bool is_free = false;
      for (Eigen::Index f : free)
        if (f == i) { is_free = true; break; }
      if (!is_free && g(i) < add_val) {
        add_val = g(i);
        add = i;
      }
    }
    if (add < 0) break;
    free.push_back(add);
  }
  for (Eigen::Index f : free) free_mask[static_cast<size_t>(f)] = true;
  return x;
}

}  // namespace detail

/// Clamp the negative spectrum of a Hermitian matrix to zero. Returns the
/// input unchanged when already PSD; otherwise reports the clamp magnitude
/// (Frobenius norm of the removed negative part) through *clamp_norm.
inline Eigen::MatrixXcd psd_floor(const Eigen::MatrixXcd& M,
                                  double* clamp_norm = nullptr) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  const Eigen::VectorXd ev = es.eigenvalues();
  if (clamp_norm) *clamp_norm = 0.0;
  if ((ev.array() >= 0.0).all()) return M;
  Eigen::VectorXd clamped = ev.cwiseMax(0.0);
  if (clamp_norm) *clamp_norm = (ev - clamped).norm();
  return es.eigenvectors() * clamped.asDiagonal() *
         es.eigenvectors().adjoint();
}

/// Solve a convex QCQP by maximizing the dual over the constraint
/// multipliers. The inner minimization for fixed multipliers is a linear
/// solve (or an active-set nonnegative solve); the dual is concave and is
/// ascended with a damped projected Newton step, with projected gradient
/// as a fallback. Single-constraint problems reduce to bisection-like
/// behavior of the same iteration.
template <typename Scalar>
QcqpSolution<Scalar> solve_qcqp(const QcqpProblem<Scalar>& problem,
                                double tol = 1e-7, int max_iter = 5000) {
  using Mat = typename QcqpProblem<Scalar>::Mat;
  using Vec = typename QcqpProblem<Scalar>::Vec;

  const Eigen::Index n = problem.P.rows();
  if (problem.P.cols() != n || problem.q.size() != n)
    throw std::invalid_argument("qcqp dimension mismatch");
  if (problem.constraint_mats.size() != problem.constraint_bounds.size())
    throw std::invalid_argument("qcqp constraint count mismatch");
  if (!(tol > 0.0)) throw std::invalid_argument("qcqp tolerance must be positive");
  if constexpr (!std::is_same_v<Scalar, double>) {
    if (problem.nonnegative)
      throw std::invalid_argument("nonnegative mode requires a real problem");
  }
  const int m = static_cast<int>(problem.constraint_mats.size());
  for (int j = 0; j < m; ++j) {
    if (problem.constraint_mats[static_cast<size_t>(j)].rows() != n)
      throw std::invalid_argument("qcqp constraint dimension mismatch");
    if (!(problem.constraint_bounds[static_cast<size_t>(j)] > 0.0))
      throw std::invalid_argument("qcqp constraint bounds must be positive");
  }

  QcqpSolution<Scalar> sol;

  // Normalize scales: objective by its own magnitude, each constraint by its
  // matrix magnitude. Duals are mapped back at the end.
  Mat P = (problem.P + problem.P.adjoint()) / Scalar(2);
  const double pscale = std::max({P.cwiseAbs().maxCoeff(),
                                  problem.q.cwiseAbs().maxCoeff(), 1e-300});
  P /= pscale;
  Vec q = problem.q / pscale;

  if (!problem.assume_psd) {
    Eigen::SelfAdjointEigenSolver<Mat> es(P, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().cwiseAbs().maxCoeff();
    if (lo < -1e-8 * std::max(hi, 1.0)) {
      sol.status = QcqpStatus::IndefiniteObjective;
      sol.x = Vec::Zero(n);
      sol.duals = Eigen::VectorXd::Zero(m);
      return sol;
    }
  }

  std::vector<Mat> A(static_cast<size_t>(m));
  Eigen::VectorXd c(m), ascale(m);
  for (int j = 0; j < m; ++j) {
    const auto& Aj = problem.constraint_mats[static_cast<size_t>(j)];
    ascale(j) = std::max(Aj.cwiseAbs().maxCoeff(), 1e-300);
    A[static_cast<size_t>(j)] = (Aj + Aj.adjoint()) / (Scalar(2) * ascale(j));
    c(j) = problem.constraint_bounds[static_cast<size_t>(j)] / ascale(j);
  }

  const double ridge = 1e-11;
  Eigen::VectorXd lam = Eigen::VectorXd::Zero(m);
  Vec x = Vec::Zero(n);
  std::vector<bool> free_mask(static_cast<size_t>(n), true);

  Eigen::LDLT<Mat> ldlt;
  bool have_factor = false;

  auto inner_solve = [&](const Eigen::VectorXd& l) -> Vec {
    Mat M = P + ridge * Mat::Identity(n, n);
    for (int j = 0; j < m; ++j)
      if (l(j) != 0.0) M += Scalar(l(j)) * A[static_cast<size_t>(j)];
    if (problem.nonnegative) {
      if constexpr (std::is_same_v<Scalar, double>) {
        have_factor = false;
        return detail::nnls_solve(M, q, free_mask);
      } else {
        throw std::logic_error("unreachable");
      }
    }
    ldlt.compute(M);
    have_factor = true;
    std::fill(free_mask.begin(), free_mask.end(), true);
    return ldlt.solve(q);
  };

  auto dual_value = [&](const Vec& xx, const Eigen::VectorXd& l) {
    double v = detail::real_part(xx.dot(P * xx)) - 2.0 * detail::real_part(q.dot(xx));
    for (int j = 0; j < m; ++j)
      v += l(j) * (detail::real_part(xx.dot(A[static_cast<size_t>(j)] * xx)) - c(j));
    return v;
  };

  auto violations = [&](const Vec& xx) {
    Eigen::VectorXd v(m);
    for (int j = 0; j < m; ++j)
      v(j) = detail::real_part(xx.dot(A[static_cast<size_t>(j)] * xx)) - c(j);
    return v;
  };

  auto kkt_residual = [&](const Vec& xx, const Eigen::VectorXd& l,
                          const Eigen::VectorXd& v) {
    double r = 0.0;
    for (int j = 0; j < m; ++j) {
      const double s = std::max(1.0, c(j));
      r = std::max(r, v(j) / s);            // primal feasibility
      r = std::max(r, std::abs(l(j) * v(j)) / s);  // complementary slackness
    }
    // Stationarity (with bound multipliers for the nonnegative case).
    Mat M = P;
    for (int j = 0; j < m; ++j)
      if (l(j) != 0.0) M += Scalar(l(j)) * A[static_cast<size_t>(j)];
    const Vec grad = M * xx - q;
    const double gs = std::max(1.0, q.template lpNorm<Eigen::Infinity>());
    if (problem.nonnegative) {
      if constexpr (std::is_same_v<Scalar, double>) {
        for (Eigen::Index i = 0; i < n; ++i) {
          if (xx(i) > 0.0)
            r = std::max(r, std::abs(grad(i)) / gs);
          else
            r = std::max(r, -grad(i) / gs);
        }
      }
    } else {
      r = std::max(r, grad.template lpNorm<Eigen::Infinity>() / gs);
    }
    return r;
  };

  x = inner_solve(lam);
  double g_cur = dual_value(x, lam);

  sol.status = QcqpStatus::MaxIter;
  int iter = 0;
  int stalled = 0;
  for (; iter < max_iter; ++iter) {
    const Eigen::VectorXd v = violations(x);
    const double res = kkt_residual(x, lam, v);
    if (res <= tol) {
      sol.status = QcqpStatus::Optimal;
      sol.kkt_residual = res;
      break;
    }
    sol.kkt_residual = res;
    if (m == 0) break;  // unconstrained; inner solve is final up to the ridge

    // Active set: positive multipliers and near-violated constraints.
    std::vector<int> act;
    for (int j = 0; j < m; ++j)
      if (lam(j) > 0.0 || v(j) > -tol * std::max(1.0, c(j))) act.push_back(j);
    if (act.empty()) {
      sol.status = QcqpStatus::Optimal;
      break;
    }
    const int ma = static_cast<int>(act.size());

    // Newton direction on the dual restricted to the active set.
    // H_ij = 2 Re((A_i x)_F^H M_FF^{-1} (A_j x)_F) is the negated dual Hessian.
    Eigen::MatrixXd Hd(ma, ma);
    bool have_newton = false;
    {
      std::vector<Eigen::Index> free;
      for (Eigen::Index i = 0; i < n; ++i)
        if (free_mask[static_cast<size_t>(i)]) free.push_back(i);
      if (!free.empty()) {
        const auto nf = static_cast<Eigen::Index>(free.size());
        Eigen::MatrixXd Hfull;
        std::vector<Vec> ax(static_cast<size_t>(ma));
        for (int a = 0; a < ma; ++a)
          ax[static_cast<size_t>(a)] = A[static_cast<size_t>(act[static_cast<size_t>(a)])] * x;
        if (have_factor && nf == n) {
          for (int a = 0; a < ma; ++a) {
            const Vec ya = ldlt.solve(ax[static_cast<size_t>(a)]);
            for (int b = a; b < ma; ++b) {
              Hd(a, b) = Hd(b, a) =
                  2.0 * detail::real_part(ax[static_cast<size_t>(b)].dot(ya));
            }
          }
          have_newton = true;
        } else if constexpr (std::is_same_v<Scalar, double>) {
          // Nonnegative case: restrict to the free set.
          Mat M = P + ridge * Mat::Identity(n, n);
          for (int j = 0; j < m; ++j)
            if (lam(j) != 0.0) M += lam(j) * A[static_cast<size_t>(j)];
          Eigen::MatrixXd Mf(nf, nf);
          for (Eigen::Index a = 0; a < nf; ++a)
            for (Eigen::Index b = 0; b < nf; ++b)
              Mf(a, b) = M(free[static_cast<size_t>(a)], free[static_cast<size_t>(b)]);
          Eigen::LDLT<Eigen::MatrixXd> lf(Mf);
          for (int a = 0; a < ma; ++a) {
            Eigen::VectorXd af(nf);
            for (Eigen::Index i = 0; i < nf; ++i)
              af(i) = ax[static_cast<size_t>(a)](free[static_cast<size_t>(i)]);
            const Eigen::VectorXd ya = lf.solve(af);
            for (int b = a; b < ma; ++b) {
              Eigen::VectorXd bf(nf);
              for (Eigen::Index i = 0; i < nf; ++i)
                bf(i) = ax[static_cast<size_t>(b)](free[static_cast<size_t>(i)]);
              Hd(a, b) = Hd(b, a) = 2.0 * bf.dot(ya);
            }
          }
          have_newton = true;
        }
      }
    }

    Eigen::VectorXd dir = Eigen::VectorXd::Zero(m);
    if (have_newton) {
      Eigen::VectorXd va(ma);
      for (int a = 0; a < ma; ++a) va(a) = v(act[static_cast<size_t>(a)]);
      Hd.diagonal().array() += 1e-12 * std::max(1.0, Hd.cwiseAbs().maxCoeff());
      const Eigen::VectorXd step = Hd.ldlt().solve(va);
      for (int a = 0; a < ma; ++a) dir(act[static_cast<size_t>(a)]) = step(a);
    }
    if (!have_newton || !dir.allFinite()) {
      dir = v.cwiseMax(0.0);  // projected gradient fallback
    }

    // Backtracking line search on the (concave) dual value.
    bool accepted = false;
    const double g_before = g_cur;
    double t = 1.0;
    for (int ls = 0; ls < 60; ++ls) {
      const Eigen::VectorXd lam_try = (lam + t * dir).cwiseMax(0.0);
      if ((lam_try - lam).lpNorm<Eigen::Infinity>() == 0.0) break;
      const Vec x_try = inner_solve(lam_try);
      const double g_try = dual_value(x_try, lam_try);
      if (g_try >= g_cur - 1e-14 * std::max(1.0, std::abs(g_cur))) {
        lam = lam_try;
        x = x_try;
        accepted = g_try > g_cur;
        g_cur = g_try;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      // Dual cannot improve: treat the current point as converged if it is
      // feasible to a loose tolerance, otherwise keep iterating on gradient.
      const Eigen::VectorXd v2 = violations(x);
      bool loose_ok = true;
      for (int j = 0; j < m; ++j)
        if (v2(j) > 1e3 * tol * std::max(1.0, c(j))) loose_ok = false;
      if (loose_ok) {
        sol.status = QcqpStatus::Optimal;
        sol.kkt_residual = kkt_residual(x, lam, v2);
        break;
      }
      // Repeated stalls mean the dual has flattened while the iterate is
      // still infeasible (degenerate or near-infeasible instance): give up
      // instead of burning the full iteration budget on tiny nudges.
      if (++stalled >= 30) break;
      lam = (lam + 1e-3 * v2.cwiseMax(0.0)).cwiseMax(0.0);
      x = inner_solve(lam);
      g_cur = dual_value(x, lam);
    }
    // Stagnation check on the dual value itself: the line search can keep
    // "accepting" flat steps indefinitely on degenerate instances.
    if (g_cur - g_before <= 1e-12 * std::max(1.0, std::abs(g_cur))) {
      if (++stalled >= 30) break;
    } else {
      stalled = 0;
    }
  }

  sol.x = x;
  sol.objective = pscale * (detail::real_part(x.dot(P * x)) -
                            2.0 * detail::real_part(q.dot(x)));
  sol.duals = Eigen::VectorXd(m);
  for (int j = 0; j < m; ++j) sol.duals(j) = lam(j) * pscale / ascale(j);
  if (sol.status == QcqpStatus::Optimal && !std::isfinite(sol.kkt_residual)) {
    const Eigen::VectorXd v = violations(x);
    sol.kkt_residual = kkt_residual(x, lam, v);
  }
  return sol;
}

}  // namespace satee
