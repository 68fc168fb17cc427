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

// Runs every acceptance criterion and prints one PASS/FAIL line each.
// Exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "qne/game.h"
#include "qne/games.h"
#include "qne/gap.h"
#include "qne/harness.h"
#include "qne/projection.h"
#include "qne/properties.h"
#include "qne/rng.h"
#include "qne/schemes.h"

namespace qne {
namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

Vector Filled(int n, double v) { return Vector::Constant(n, v); }

Outcome CournotWsConstant() {
  CournotGame g;
  Vector F = CournotExpectedMap(g, g.MakeProfile(Filled(4, 20.0)));
  bool ok = true;
  for (int i = 0; i < 4; ++i) ok = ok && F[i] == 19.0;
  std::ostringstream s;
  s << "F(20,20,20,20) = (" << F[0] << "," << F[1] << "," << F[2] << ","
    << F[3] << ")";
  return {ok, s.str()};
}

Outcome CopositiveConstants() {
  CopositiveCongestionGame g;
  Profile xs = CopositiveReferenceSolution(g).x_star;
  Vector F = CopositiveExpectedMap(g, xs);
  Matrix J = CopositiveJacobian(g, xs);
  Matrix J20 = CopositiveJacobian(g, g.MakeProfile(Filled(8, 20.0)));
  Matrix S = 0.5 * (J20 + J20.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(S);
  const double lmin = es.eigenvalues().minCoeff();
  const bool ok = F == Vector::Zero(8) && J == Matrix::Identity(8, 8) &&
                  std::abs(lmin + 9.0) <= 1e-9;
  std::ostringstream s;
  s << "|F(x*)|=" << F.norm() << " J(x*)==I:" << (J == Matrix::Identity(8, 8))
    << " lambda_min=" << FormatDouble(lmin);
  return {ok, s.str()};
}

Outcome LocalLinearRate() {
  CournotGame g;
  const GameConstants k = g.constants();
  const int N = g.num_players();
  const double delta = 0.1;
  const double e0 =
      LinearRateRadius(delta, *k.weak_sharpness, *k.lipschitz, N);
  auto [gamma0, q] = GeometricParams(e0, delta, *k.weak_sharpness,
                                     *k.lipschitz, *k.grad_bound_sq, N);
  const Profile xs = CournotReferenceSolution(g).x_star;
  const auto ref = ReferenceSolution::Analytic(xs);
  RngStream rng(3);
  const double r2 = N * e0 * e0;
  int violations = 0, starts = 0;
  for (int s = 0; s < 30; ++s) {
    // Uniform in the ball of radius sqrt(r2), then projected.
    Vector d(N);
    for (int j = 0; j < N; ++j) d[j] = rng.Normal();
    d *= std::sqrt(r2) * std::pow(rng.Uniform(), 1.0 / N) / d.norm();
    Profile x0 = g.ProjectProfile(xs.WithData(xs.data() + d));
    if ((x0.data() - xs.data()).squaredNorm() > r2) continue;
    ++starts;
    Trajectory t = RunScheme(g, Scheme::kSgr, Geometric{gamma0, q}, x0, 200,
                             rng.Substream(s, 1), ref);
    for (std::size_t j = 0; j < t.sq_error.size(); ++j) {
      if (t.sq_error[j] > r2 * std::pow(q, 2.0 * t.iterations[j])) ++violations;
    }
  }
  std::ostringstream s;
  s << "gamma0=" << FormatDouble(gamma0) << " q=" << FormatDouble(q)
    << " e0=" << FormatDouble(e0) << " starts=" << starts
    << " violations=" << violations;
  return {violations == 0 && starts >= 20, s.str()};
}

Outcome TwoStageDominance() {
  auto bundle = ReproduceBundle("fig2a", 42);
  RunRecord sgr = RunExperiment(bundle[0].config);
  RunRecord two = RunExperiment(bundle[1].config);
  auto [ks, kt] = CompareRuns(sgr, two, 1e-3);
  const bool ok = kt != kNotReached && (ks == kNotReached || kt < ks);
  std::ostringstream s;
  s << "iterations to 1e-3: two-stage=" << kt << " sgr="
    << (ks == kNotReached ? std::string("not reached") : std::to_string(ks))
    << " (horizon " << bundle[0].config.iters << ")";
  return {ok, s.str()};
}

Outcome SublinearEnvelope() {
  ExperimentConfig cfg;
  cfg.game = "network";
  cfg.scheme = SchemeKind::kSsgr;
  const double gamma0 = 1.0;
  cfg.policy = Diminishing{gamma0};
  cfg.paths = 50;
  cfg.iters = 10000;
  cfg.record_every = 1;
  cfg.seed = 5;
  RunRecord rec = RunExperiment(cfg);
  Aggregate agg = AggregateRecord(rec);

  auto game = BuildGame("network");
  Profile xs = game->MakeProfile(Eigen::Map<const Vector>(
      rec.reference_x.data(), static_cast<Eigen::Index>(rec.reference_x.size())));
  RngStream rng(55);
  PropertyReport qg = CheckQG(*game, xs, 4000, rng);
  if (qg.verdict != Verdict::kCertified)
    return {false, "check_qg did not certify: " + VerdictName(qg.verdict)};
  const double alpha = *qg.constant_estimate;

  // M1: sup over X of the noise variance; M2: sup over X of |F|^2.
  const FeasibleSet& X = game->joint_feasible();
  double M1 = 0, M2 = 0;
  Vector sm(game->total_dim());
  Draw draw;
  for (int p = 0; p < 400; ++p) {
    Profile x = game->MakeProfile(p == 0 ? Vector(xs.data())
                                         : SampleFeasible(X, rng));
    Vector F = game->ExpectedMap(x);
    M2 = std::max(M2, F.squaredNorm());
    double var = 0;
    for (int d = 0; d < 200; ++d) {
      game->noise().SampleInto(rng, draw);
      game->SampleMapInto(x, draw, sm);
      var += (sm - F).squaredNorm();
    }
    M1 = std::max(M1, var / 200);
  }
  const double e1 = agg.mean_sq_err[0];
  const double Q = QBound(gamma0, alpha, M1 + M2, e1);

  // Record k holds the iterate after k steps, the theorem's x^(k+1).
  int violations = 0;
  double worst = 0;
  for (std::size_t j = 0; j < rec.iterations.size(); ++j) {
    const int k = rec.iterations[j];
    if (k < 10) continue;
    const double ratio = agg.mean_sq_err[j] / (1.5 * Q / (k + 1));
    worst = std::max(worst, ratio);
    if (ratio > 1.0) ++violations;
  }
  int positive = 0, last_positive = 0, zero_from = -1;
  for (std::size_t j = 0; j < rec.iterations.size(); ++j) {
    if (agg.mean_sq_err[j] > 0) {
      zero_from = -1;
      if (rec.iterations[j] >= 10) ++positive;
      last_positive = rec.iterations[j];
    } else if (zero_from < 0) {
      zero_from = rec.iterations[j];
    }
  }
  std::ostringstream s;
  s << "alpha=" << FormatDouble(alpha) << " M1=" << FormatDouble(M1)
    << " M2=" << FormatDouble(M2) << " Q=" << FormatDouble(Q)
    << " max err/(1.5Q/k)=" << FormatDouble(worst)
    << " violations=" << violations;
  if (positive < 10) {
    // Every path sits exactly on the vertex x* from zero_from on, so the
    // log-log fit has no data.
    s << "; slope not computable: " << positive
      << " positive checkpoints with k >= 10, mean error is exactly 0 for all k >= "
      << zero_from;
    return {false, s.str()};
  }
  RateFitResult fit = RateFit(rec.iterations, agg.mean_sq_err, 10,
                              last_positive, FitMode::kLogLog);
  s << " slope=" << FormatDouble(fit.slope) << " over " << fit.points
    << " points";
  return {violations == 0 && fit.slope <= -0.8, s.str()};
}

Outcome ConstantStepComplexity() {
  const int n = 4;
  const double alpha = 1.0;
  Matrix A = alpha * Matrix::Identity(n, n);
  A(0, 1) = 1.0, A(1, 0) = -1.0, A(2, 3) = 0.5, A(3, 2) = -0.5;
  Vector xs(n);
  xs << 1, 2, 3, 4;
  NoiseLaw law;
  law.uniform.assign(n, {-1.0, 1.0});
  MapGame g("strongly_monotone_quadratic",
            std::vector<FeasibleSet>(n, FeasibleSet::MakeInterval(-100, 100)),
            [A, xs](const Vector& x) { return Vector(A * (x - xs)); }, law);
  const auto ref = ReferenceSolution::Analytic(g.MakeProfile(xs));
  const Profile x0 = g.MakeProfile(xs + Filled(n, 5.0));
  const int paths = 200;
  std::vector<double> deltas = {0.1, 0.01}, ratio;
  RngStream root(6);
  std::ostringstream s;
  for (double delta : deltas) {
    const int K = static_cast<int>(
        std::ceil(std::log(1.0 / delta) / (2.0 * alpha * delta * delta)));
    double mse = 0;
    RunOptions opt;
    opt.record_every = K;
    for (int p = 0; p < paths; ++p) {
      Trajectory t = RunScheme(g, Scheme::kSsgr, Constant{delta}, x0, K,
                               root.ForReplication(p), ref, opt);
      mse += t.sq_error.back();
    }
    mse /= paths;
    ratio.push_back(mse / delta);
    s << "delta=" << delta << " K=" << K << " mse=" << FormatDouble(mse)
      << "; ";
  }
  const double C = std::sqrt(ratio[0] * ratio[1]);
  bool ok = true;
  for (double r : ratio) ok = ok && r <= 3 * C && r >= C / 3;
  s << "C=" << FormatDouble(C);
  return {ok, s.str()};
}

Outcome GapIdentities() {
  CopositiveCongestionGame cop;
  Profile xs = CopositiveReferenceSolution(cop).x_star;
  const double th = ThetaC(cop, 1.0, xs);
  const double yd = (YcExact(cop, 1.0, xs).data() - xs.data()).norm();
  bool ok = std::abs(th) <= 1e-8 && yd <= 1e-8;

  std::vector<std::shared_ptr<GameModel>> games = {
      std::make_shared<NetworkCongestionGame>(),
      std::make_shared<CournotGame>(),
      std::make_shared<CopositiveCongestionGame>()};
  RngStream rng(7);
  double min_theta = std::numeric_limits<double>::infinity();
  for (const auto& g : games) {
    for (int p = 0; p < 500; ++p) {
      Profile x = g->MakeProfile(SampleFeasible(g->joint_feasible(), rng));
      min_theta = std::min(min_theta, ThetaC(*g, 1.0, x));
    }
  }
  ok = ok && min_theta >= -1e-10;

  double worst = 0;
  int points = 0;
  for (const auto& g : games) {
    if (!g->has_jacobian()) continue;
    const int n = g->total_dim();
    for (int p = 0; p < 20; ++p, ++points) {
      Profile x = g->MakeProfile(SampleFeasible(g->joint_feasible(), rng));
      Vector grad = GradThetaExact(*g, 1.0, x);
      Vector fd(n);
      const double h = 1e-5;
      for (int j = 0; j < n; ++j) {
        Vector e = Vector::Zero(n);
        e[j] = h;
        fd[j] = (ThetaC(*g, 1.0, x.WithData(x.data() + e)) -
                 ThetaC(*g, 1.0, x.WithData(x.data() - e))) / (2 * h);
      }
      worst = std::max(worst, (grad - fd).norm() / std::max(1.0, grad.norm()));
    }
  }
  ok = ok && worst <= 1e-5;
  std::ostringstream s;
  s << "theta(x*)=" << FormatDouble(th) << " |y(x*)-x*|=" << FormatDouble(yd)
    << " min theta over 1500 points=" << FormatDouble(min_theta)
    << " worst FD rel err=" << FormatDouble(worst) << " over " << points
    << " points";
  return {ok, s.str()};
}

Outcome ZamgrEndToEnd() {
  auto bundle = ReproduceBundle("fig2b", 8);
  std::vector<double> errs;
  std::ostringstream s;
  s << "inner t_k cap=" << bundle[0].config.gap.inner_cap
    << " batch_scale=" << bundle[0].config.gap.batch_scale << "; ";
  for (const auto& nc : bundle) {
    RunRecord rec = RunExperiment(nc.config);
    errs.push_back(MeanOf(rec.final_rel_err));
    s << "K=" << nc.config.iters << " err=" << FormatDouble(errs.back())
      << "; ";
  }
  bool ok = errs.back() <= 0.1;
  for (std::size_t i = 1; i < errs.size(); ++i) ok = ok && errs[i] < errs[i - 1];
  return {ok, s.str()};
}

Outcome InnerSaRate() {
  CopositiveCongestionGame g;
  const double c = 1.0, alpha0 = 1.0, Gamma = 1.0;
  const int n = g.total_dim();
  RngStream rng(9);
  Profile xh = g.MakeProfile(
      (Vector(n) << 9, 11, 10.5, 9.5, 10, 10.2, 9.8, 10).finished());
  Profile yc = YcExact(g, c, xh);
  const FeasibleSet& X = g.joint_feasible();
  Profile y0 = xh.WithData(Project(X, xh.data()));

  Vector F = g.ExpectedMap(xh);
  double cF_sq = 0;
  for (int s = 0; s < 20000; ++s) {
    Vector y = SampleFeasible(X, rng);
    cF_sq = std::max(cF_sq, (F + c * (y - xh.data())).squaredNorm());
  }
  Vector sm(n);
  double vG_sq = 0;
  for (int s = 0; s < 20000; ++s) {
    g.SampleMapInto(xh, g.noise().Sample(rng), sm);
    vG_sq += (sm - F).squaredNorm();
  }
  vG_sq /= 20000;
  Vector far = (y0.data() - X.lower()).cwiseAbs().cwiseMax(
      (X.upper() - y0.data()).cwiseAbs());
  const double cst =
      InnerErrorConstant(c, alpha0, Gamma, cF_sq, vG_sq, far.squaredNorm());
  bool ok = true;
  double prev = std::numeric_limits<double>::infinity();
  std::ostringstream s;
  s << "c_eps=" << FormatDouble(cst) << "; ";
  for (int t : {100, 1000, 10000}) {
    double mse = 0;
    for (int r = 0; r < 100; ++r) {
      RngStream inner = rng.Substream(t, r);
      mse += (SaInner(g, c, xh, t, alpha0, Gamma, y0, inner).data() -
              yc.data()).squaredNorm();
    }
    mse /= 100;
    const double bound = cst / (t + Gamma);
    ok = ok && mse <= 2.0 * bound && mse < prev;
    prev = mse;
    s << "t=" << t << " mse=" << FormatDouble(mse)
      << " bound=" << FormatDouble(bound) << "; ";
  }
  return {ok, s.str()};
}

Outcome PropertySuite() {
  std::ostringstream s;
  bool ok = true;
  NetworkCongestionGame net;
  RngStream rng(10);

  PropertyReport pot = CheckPotential(net, 2000, rng);
  ok = ok && pot.verdict == Verdict::kCertified;
  s << "potential=" << VerdictName(pot.verdict) << "; ";

  for (int l = 0; l < net.num_links(); ++l) {
    auto link = NetworkLinkGame(net, l);
    PropertyReport sp = CheckSP(*link, 2000, rng);
    const bool link_ok = sp.verdict == Verdict::kCertified &&
                         sp.constant_estimate && *sp.constant_estimate > 0;
    ok = ok && link_ok;
    s << "sp[" << l << "]=" << VerdictName(sp.verdict);
    if (sp.constant_estimate) s << "(" << FormatDouble(*sp.constant_estimate) << ")";
    s << " ";
  }

  ReferenceSolution ref = NetworkReferenceSolution(net, 1e-10);
  PropertyReport qg = CheckQG(net, ref.x_star, 4000, rng);
  ok = ok && qg.verdict == Verdict::kCertified;
  s << "; qg=" << VerdictName(qg.verdict) << "; ";

  CopositiveCongestionGame cop;
  PropertyReport mono = MonotoneProbe(cop, 2000, rng);
  const bool replay =
      mono.verdict == Verdict::kRefuted && ReplayWitness(cop, mono);
  ok = ok && replay;
  s << "monotone(copositive)=" << VerdictName(mono.verdict)
    << " replayed=" << replay << "; ";

  const double c = 2, A = 1, B = 1, p = 1;
  std::vector<double> e = ChungRecursionOracle(c, A, B, p, 1.0, 1000000);
  const double envelope = (A + B) / (c - p);
  double tail = 0;
  for (int k = 100000; k <= 1000000; ++k) tail = std::max(tail, k * e[k - 1]);
  ok = ok && tail <= 1.05 * envelope;
  s << "chung sup_{k>=1e5} k e_k=" << FormatDouble(tail)
    << " envelope=" << FormatDouble(envelope);
  return {ok, s.str()};
}

struct Criterion {
  int id;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace qne

int main() {
  using qne::Criterion;
  const std::vector<Criterion> criteria = {
      {1, 1, qne::CournotWsConstant},       {2, 1, qne::CopositiveConstants},
      {3, 5, qne::LocalLinearRate},         {4, 30, qne::TwoStageDominance},
      {5, 300, qne::SublinearEnvelope},     {6, 60, qne::ConstantStepComplexity},
      {7, 30, qne::GapIdentities},          {8, 600, qne::ZamgrEndToEnd},
      {9, 120, qne::InnerSaRate},           {10, 120, qne::PropertySuite},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    qne::Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.limit_seconds;
    const bool pass = out.ok && in_time;
    if (!pass) ++failed;
    std::printf("%s criterion %d: %s [%.2f s, limit %.0f s%s]\n",
                pass ? "PASS" : "FAIL", c.id, out.detail.c_str(), secs,
                c.limit_seconds, in_time ? "" : ", over limit");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
