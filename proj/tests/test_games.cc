// Copyright 2026 The QNE Solver Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "qne/errors.h"
#include "qne/games.h"
#include "qne/properties.h"

namespace qne {
namespace {

Vector V(std::initializer_list<double> v) {
  Vector out(static_cast<int>(v.size()));
  int j = 0;
  for (double x : v) out[j++] = x;
  return out;
}

Matrix FiniteDifferenceJacobian(const GameModel& g, const Profile& x, double h) {
  const int n = g.total_dim();
  Matrix J(n, n);
  for (int j = 0; j < n; ++j) {
    Vector e = Vector::Zero(n);
    e[j] = h;
    J.col(j) = (g.ExpectedMap(x.WithData(x.data() + e)) -
                g.ExpectedMap(x.WithData(x.data() - e))) / (2 * h);
  }
  return J;
}

TEST_CASE("network expected map matches a Monte Carlo oracle") {
  NetworkCongestionGame g;
  const auto& p = g.params();
  RngStream rng(1);
  for (int t = 0; t < 10; ++t) {
    Profile x = g.MakeProfile(SampleFeasible(g.joint_feasible(), rng));
    Vector F = g.ExpectedMap(x);
    Vector oracle(g.total_dim());
    for (int l = 0; l < g.num_links(); ++l) {
      Vector flows = g.LinkFlows(x, l);
      const double s = flows.norm();
      double acc = 0;
      const int draws = 1000000;
      for (int k = 0; k < draws; ++k) {
        double b = rng.Uniform(p.b_low, p.b_high);
        acc += p.M / (s * (b - s) * (b - s));
      }
      const double m = acc / draws - p.beta_mean;
      for (int i = 0; i < g.num_players(); ++i) oracle[x.offset(i) + l] = m * flows[i];
    }
    for (int j = 0; j < F.size(); ++j) {
      CHECK(std::abs(F[j] - oracle[j]) <= 1e-3 * std::abs(oracle[j]));
    }
  }
}

TEST_CASE("network map details") {
  NetworkCongestionGame g;
  RngStream rng(2);
  for (int t = 0; t < 2000; ++t) {
    Profile x = g.MakeProfile(SampleFeasible(g.joint_feasible(), rng));
    for (int l = 0; l < g.num_links(); ++l) {
      double m = g.ExpectedMultiplier(g.LinkFlows(x, l).norm());
      CHECK(m > 0);
      CHECK(m >= g.LinkSpConstant(l) * (1 - 1e-12));
    }
  }
  // A link carrying no flow contributes a zero block.
  Vector z = Vector::Constant(24, 5.0);
  for (int i = 0; i < 4; ++i) z[6 * i + 2] = 0.0;
  Vector F = g.ExpectedMap(g.MakeProfile(z));
  for (int i = 0; i < 4; ++i) CHECK(F[6 * i + 2] == 0.0);

  CHECK_THROWS_AS(g.ExpectedMap(g.MakeProfile(Vector::Constant(24, 30.0))),
                  DomainError);
  NetworkParams bad = DefaultNetworkParams();
  bad.ub[0] = 30;
  CHECK_THROWS_AS(NetworkCongestionGame{bad}, InvalidArgument);

  // The closed-form norm-range bound is not informative at these parameters.
  for (int l = 0; l < g.num_links(); ++l) {
    CHECK(g.LinkCoarseBound(l) < g.LinkSpConstant(l));
  }
}

TEST_CASE("network conservation sets") {
  NetworkCongestionGame g;
  Vector x(6);
  x << 4.5, 5.5, 4.4, 4.6, 4.8, 10.0;
  CHECK(IsFeasible(g.feasible(0), x, 1e-12));
  x[5] = 10.5;
  CHECK_FALSE(IsFeasible(g.feasible(0), x, 1e-6));
}

TEST_CASE("network potential matches objective differences") {
  NetworkCongestionGame g;
  RngStream rng(3);
  CHECK(CheckPotential(g, 300, rng).verdict == Verdict::kCertified);
  // The potential's gradient is F.
  for (int t = 0; t < 5; ++t) {
    Profile x = g.MakeProfile(SampleFeasible(g.joint_feasible(), rng));
    Vector F = g.ExpectedMap(x);
    for (int j = 0; j < g.total_dim(); ++j) {
      Vector e = Vector::Zero(g.total_dim());
      e[j] = 1e-5;
      double d = (g.Potential(x.WithData(x.data() + e)) -
                  g.Potential(x.WithData(x.data() - e))) / 2e-5;
      CHECK(std::abs(d - F[j]) <= 1e-5 * (1 + std::abs(F[j])));
    }
  }
}

TEST_CASE("network reference solution") {
  NetworkCongestionGame g;
  const double tol = 1e-8;
  ReferenceSolution r = NetworkReferenceSolution(g, tol);
  CHECK(r.provenance == Provenance::kOracleComputed);
  CHECK(r.tolerance == tol);
  CHECK(NaturalResidual(g, r.x_star) <= tol);
  ReferenceSolution fine = NetworkReferenceSolution(g, tol / 10);
  CHECK((fine.x_star.data() - r.x_star.data()).norm() <= 10 * tol);
  // Frozen from an independent projected-gradient run.
  Vector frozen(24);
  frozen << 4, 4.2, 4.4, 4.6, 4.8, 8.2, 9.2, 4.2, 4.4, 4.6, 4.8, 5, 4, 4.2, 4.4,
      9.0, 4.8, 5, 4, 4.2, 4.4, 4.6, 4.8, 9.0;
  CHECK((r.x_star.data() - frozen).norm() <= 1e-6);
  CHECK_THROWS_AS(NetworkReferenceSolution(g, 0.0), InvalidArgument);
  CHECK_THROWS_AS(NetworkReferenceSolution(g, 1e-8, 3), OracleFailure);

  RngStream rng(4);
  PropertyReport qg = CheckQG(g, r.x_star, 2000, rng);
  CHECK(*qg.constant_estimate > 0);
}

TEST_CASE("cournot map") {
  CournotGame g;
  CHECK(CournotExpectedMap(g, g.MakeProfile(Vector::Constant(4, 20))) ==
        Vector::Constant(4, 19.0));
  CHECK(CournotExpectedMap(g, g.MakeProfile(Vector::Constant(4, 40))) ==
        Vector::Constant(4, 10.0));
  Vector F = g.ExpectedMap(g.MakeProfile(Vector::Constant(4, 57.3)));
  CHECK((F.array() == F[0]).all());
  CHECK_THROWS_AS(g.ExpectedMap(g.MakeProfile(V({0, 20, 20, 20}))), DomainError);
  CHECK_THROWS_AS(CournotGame(CournotParams{4, 400, 2, 0.01, 0, 100}), InvalidArgument);

  RngStream rng(5);
  for (int t = 0; t < 10; ++t) {
    Profile x = g.MakeProfile(SampleFeasible(g.joint_feasible(), rng));
    Matrix J = g.JacobianOfExpectedMap(x);
    CHECK((J - FiniteDifferenceJacobian(g, x, 1e-4)).norm() <= 1e-6 * (1 + J.norm()));
  }
  CHECK(CheckPotential(g, 300, rng).verdict == Verdict::kCertified);

  auto k = g.constants();
  CHECK(*k.weak_sharpness == 19.0);
  CHECK(*k.lipschitz > 0);
  // Sampled Jacobian norms stay under the Lipschitz bound.
  for (int t = 0; t < 1000; ++t) {
    Profile x = g.MakeProfile(SampleFeasible(g.joint_feasible(), rng));
    Eigen::JacobiSVD<Matrix> svd(g.JacobianOfExpectedMap(x));
    CHECK(svd.singularValues()[0] <= *k.lipschitz);
    CHECK(g.ExpectedMap(x).squaredNorm() <= *k.grad_bound_sq);
  }
}

TEST_CASE("cournot weak sharpness") {
  CournotGame g;
  Profile xs = CournotReferenceSolution(g).x_star;
  CHECK(CournotReferenceSolution(g).provenance == Provenance::kAnalytic);
  Vector Fs = g.ExpectedMap(xs);
  for (double t : {0.5, 3.0, 80.0}) {
    Vector d = Vector::Unit(4, 1) * t;
    CHECK(d.dot(Fs) / d.norm() == 19.0);
  }
  RngStream rng(6);
  PropertyReport r = CheckWS(g, xs, 5000, rng);
  CHECK(*r.constant_estimate >= 19.0 / 2);
}

TEST_CASE("copositive map and jacobian") {
  CopositiveCongestionGame g;
  Profile xs = CopositiveReferenceSolution(g).x_star;
  CHECK(CopositiveExpectedMap(g, xs) == Vector::Zero(8));
  CHECK(CopositiveJacobian(g, xs) == Matrix::Identity(8, 8));
  Profile top = g.MakeProfile(Vector::Constant(8, 20));
  CHECK(g.ExpectedMap(top) == Vector::Constant(8, 360.0));
  Matrix J = CopositiveJacobian(g, top);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) CHECK(J(i, j) == (i == j ? 1.0 : 10.0));
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (J + J.transpose()));
  CHECK(eig.eigenvalues()[0] == doctest::Approx(-9.0).epsilon(1e-12));
  CHECK(eig.eigenvalues()[6] == doctest::Approx(-9.0).epsilon(1e-12));
  CHECK(eig.eigenvalues()[7] == doctest::Approx(71.0).epsilon(1e-12));

  RngStream rng(7);
  for (int t = 0; t < 10; ++t) {
    Profile x = g.MakeProfile(SampleFeasible(g.joint_feasible(), rng));
    Matrix A = g.JacobianOfExpectedMap(x);
    CHECK((A - FiniteDifferenceJacobian(g, x, 1e-4)).norm() <= 1e-6 * A.norm());
    // Player-convexity: d^2 f_i / dx_i^2 = 1.
    for (int i = 0; i < 8; ++i) {
      Vector e = Vector::Unit(8, i) * 1e-3;
      double second = (g.Objective(i, x.WithData(x.data() + e)) -
                       2 * g.Objective(i, x) +
                       g.Objective(i, x.WithData(x.data() - e))) / 1e-6;
      CHECK(second == doctest::Approx(1.0).epsilon(1e-5));
    }
  }
}

TEST_CASE("presets") {
  for (const auto& name : PresetGameNames()) {
    auto g = MakePresetGame(name);
    CHECK(g->name() == name);
  }
  CHECK_THROWS_AS(MakePresetGame("chess"), ConfigError);
}

}  // namespace
}  // namespace qne
