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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "reference_qcqp.hpp"
#include "satee/qcqp.hpp"
#include "satee/rng.hpp"

using namespace satee;

namespace {

Eigen::MatrixXd random_psd(satee::CounterRng& rng, int n, bool full_rank) {
  Eigen::MatrixXd g(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) g(r, c) = rng.normal();
  Eigen::MatrixXd p = g.transpose() * g / n;
  if (full_rank) p.diagonal().array() += 0.1;
  return p;
}

Eigen::MatrixXcd random_psd_c(satee::CounterRng& rng, int n, bool full_rank) {
  Eigen::MatrixXcd g(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) g(r, c) = rng.cnormal();
  Eigen::MatrixXcd p = g.adjoint() * g / n;
  if (full_rank) p.diagonal().array() += 0.1;
  return p;
}

}  // namespace

TEST_CASE("unconstrained reduces to the normal equations") {
  CounterRng rng(31, 0, "qcqp");
  QcqpProblem<double> prob;
  prob.P = random_psd(rng, 5, true);
  prob.q = Eigen::VectorXd::NullaryExpr(5, [&](Eigen::Index) { return rng.normal(); });
  const auto sol = solve_qcqp(prob);
  REQUIRE(sol.status == QcqpStatus::Optimal);
  const Eigen::VectorXd expect = prob.P.ldlt().solve(prob.q);
  CHECK((sol.x - expect).norm() < 1e-6 * std::max(1.0, expect.norm()));
}

TEST_CASE("trust-region analytic solution") {
  // min ||x - q||^2-style objective with P = I and a single ball
  // constraint: the solution is q when ||q||^2 <= c, else q scaled onto
  // the boundary.
  QcqpProblem<double> prob;
  prob.P = Eigen::MatrixXd::Identity(3, 3);
  prob.q.resize(3);
  prob.q << 3.0, 0.0, 4.0;  // ||q|| = 5
  prob.constraint_mats = {Eigen::MatrixXd::Identity(3, 3)};
  prob.constraint_bounds = {4.0};  // ||x||^2 <= 4 -> boundary at radius 2
  const auto sol = solve_qcqp(prob, 1e-9);
  REQUIRE(sol.status == QcqpStatus::Optimal);
  CHECK(sol.x.norm() == doctest::Approx(2.0).epsilon(1e-6));
  CHECK((sol.x / sol.x.norm() - prob.q / prob.q.norm()).norm() < 1e-6);
  // Interior case.
  prob.constraint_bounds = {100.0};
  const auto sol2 = solve_qcqp(prob, 1e-9);
  REQUIRE(sol2.status == QcqpStatus::Optimal);
  CHECK((sol2.x - prob.q).norm() < 1e-6 * prob.q.norm());
}

TEST_CASE("matches barrier reference on random real instances") {
  CounterRng rng(32, 0, "qcqp");
  int optimal = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform() * 9.0);   // 2..10
    const int m = 1 + static_cast<int>(rng.uniform() * 4.0);   // 1..4
    QcqpProblem<double> prob;
    prob.P = random_psd(rng, n, trial % 3 != 0);
    prob.q = Eigen::VectorXd::NullaryExpr(n, [&](Eigen::Index) { return rng.normal(); });
    satee_test::RealQcqp ref;
    ref.P = prob.P;
    ref.q = prob.q;
    for (int j = 0; j < m; ++j) {
      prob.constraint_mats.push_back(random_psd(rng, n, true));
      prob.constraint_bounds.push_back(0.5 + rng.uniform() * 3.0);
      ref.A.push_back(prob.constraint_mats.back());
      ref.c.push_back(prob.constraint_bounds.back());
    }
    const auto sol = solve_qcqp(prob, 1e-9);
    const Eigen::VectorXd xr = satee_test::barrier_solve(ref);
    const double f_ref = satee_test::qcqp_objective(ref, xr);
    const double f_sol = satee_test::qcqp_objective(ref, sol.x);
    CHECK(f_sol <= f_ref + 1e-5 * std::max(1.0, std::abs(f_ref)));
    CHECK(f_sol >= f_ref - 1e-5 * std::max(1.0, std::abs(f_ref)));
    // Feasibility of the returned point.
    for (int j = 0; j < m; ++j)
      CHECK(sol.x.dot(ref.A[static_cast<size_t>(j)] * sol.x) <=
            ref.c[static_cast<size_t>(j)] * (1.0 + 1e-6));
    if (sol.status == QcqpStatus::Optimal) {
      ++optimal;
      CHECK(sol.kkt_residual <= 1e-7);
    }
  }
  CHECK(optimal >= 55);  // near-universal clean convergence expected
}

TEST_CASE("matches barrier reference on random complex instances") {
  CounterRng rng(33, 0, "qcqp");
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform() * 5.0);  // 2..6
    const int m = 1 + static_cast<int>(rng.uniform() * 3.0);
    QcqpProblem<std::complex<double>> prob;
    prob.P = random_psd_c(rng, n, trial % 4 != 0);
    prob.q = Eigen::VectorXcd::NullaryExpr(n, [&](Eigen::Index) { return rng.cnormal(); });
    satee_test::RealQcqp ref;
    ref.P = satee_test::realify(prob.P);
    ref.q = satee_test::realify(prob.q);
    for (int j = 0; j < m; ++j) {
      prob.constraint_mats.push_back(random_psd_c(rng, n, true));
      prob.constraint_bounds.push_back(0.5 + rng.uniform() * 3.0);
      ref.A.push_back(satee_test::realify(prob.constraint_mats.back()));
      ref.c.push_back(prob.constraint_bounds.back());
    }
    const auto sol = solve_qcqp(prob, 1e-9);
    const Eigen::VectorXd xr = satee_test::barrier_solve(ref);
    const double f_ref = satee_test::qcqp_objective(ref, xr);
    const Eigen::VectorXd xs = satee_test::realify(Eigen::VectorXcd(sol.x));
    const double f_sol = satee_test::qcqp_objective(ref, xs);
    CHECK(std::abs(f_sol - f_ref) <= 1e-5 * std::max(1.0, std::abs(f_ref)));
  }
}

TEST_CASE("nonnegative mode") {
  // With q pulling negative on one coordinate, the bound binds there.
  QcqpProblem<double> prob;
  prob.P = Eigen::MatrixXd::Identity(3, 3);
  prob.q.resize(3);
  prob.q << 1.0, -2.0, 0.5;
  prob.nonnegative = true;
  const auto sol = solve_qcqp(prob, 1e-9);
  REQUIRE(sol.status == QcqpStatus::Optimal);
  CHECK(sol.x(0) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(sol.x(1) == doctest::Approx(0.0));
  CHECK(sol.x(2) == doctest::Approx(0.5).epsilon(1e-7));

  // Under a ball constraint the positive part is scaled onto the boundary.
  prob.constraint_mats = {Eigen::MatrixXd::Identity(3, 3)};
  prob.constraint_bounds = {0.25};
  const auto sol2 = solve_qcqp(prob, 1e-9);
  REQUIRE(sol2.status == QcqpStatus::Optimal);
  CHECK((sol2.x.array() >= 0.0).all());
  CHECK(sol2.x.squaredNorm() <= 0.25 * (1.0 + 1e-6));
  // Compare against a fine nonnegative grid search on the 2-sphere sector.
  double best = 1e300;
  const int g = 60;
  for (int a = 0; a <= g; ++a)
    for (int b = 0; b <= g; ++b) {
      Eigen::Vector3d x(0.5 * a / g, 0.0, 0.5 * b / g);
      if (x.squaredNorm() > 0.25) continue;
      best = std::min(best, x.squaredNorm() - 2.0 * prob.q.dot(x));
    }
  const double f2 = sol2.x.squaredNorm() - 2.0 * prob.q.dot(sol2.x);
  CHECK(f2 <= best + 1e-3);
}

TEST_CASE("indefinite objective is rejected") {
  QcqpProblem<double> prob;
  prob.P = Eigen::MatrixXd::Identity(2, 2);
  prob.P(1, 1) = -1.0;
  prob.q = Eigen::VectorXd::Zero(2);
  prob.constraint_mats = {Eigen::MatrixXd::Identity(2, 2)};
  prob.constraint_bounds = {1.0};
  const auto sol = solve_qcqp(prob);
  CHECK(sol.status == QcqpStatus::IndefiniteObjective);
}

TEST_CASE("input validation") {
  QcqpProblem<double> prob;
  prob.P = Eigen::MatrixXd::Identity(2, 2);
  prob.q = Eigen::VectorXd::Zero(3);
  CHECK_THROWS_AS((void)solve_qcqp(prob), std::invalid_argument);
  prob.q = Eigen::VectorXd::Zero(2);
  prob.constraint_mats = {Eigen::MatrixXd::Identity(2, 2)};
  prob.constraint_bounds = {};
  CHECK_THROWS_AS((void)solve_qcqp(prob), std::invalid_argument);
  prob.constraint_bounds = {-1.0};
  CHECK_THROWS_AS((void)solve_qcqp(prob), std::invalid_argument);
}

TEST_CASE("psd_floor clamps the negative spectrum") {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -2.0;
  double clamp = 0.0;
  const Eigen::MatrixXcd f = psd_floor(m, &clamp);
  CHECK(clamp == doctest::Approx(2.0).epsilon(1e-12));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(f);
  CHECK(es.eigenvalues().minCoeff() >= -1e-12);
  // Already-PSD input passes through unchanged.
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(3, 3);
  CHECK((psd_floor(id, &clamp) - id).norm() == 0.0);
  CHECK(clamp == 0.0);
}
