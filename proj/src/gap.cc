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

#include "qne/gap.h"

#include <cmath>
#include <string>

#include "qne/errors.h"

namespace qne {
namespace {

constexpr std::uint64_t kRoleSelect = 1;
constexpr std::uint64_t kRoleOutput = 2;
constexpr std::uint64_t kRoleSampleBase = 16;

void Require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

Vector MapAt(const GameModel& game, const Profile& x) {
  return MakeDeterministicMap(game)(x);
}

}  // namespace

void GapConfig::Validate(int num_players) const {
  Require(c > 0, "c > 0");
  Require(a >= 0 && b >= 0 && e >= 0, "a, b, e >= 0");
  Require(delta > 0, "delta > 0");
  Require(e >= 2 * b, "e >= 2b");
  Require(alpha0 > 1.0 / (2.0 * c), "alpha0 > 1/(2c)");
  Require(Gamma > 0, "Gamma > 0");
  Require(lambda > 0 && lambda < 1, "0 < lambda < 1");
  Require(gamma > 0, "gamma > 0");
  Require(gamma < num_players, "gamma < N");
  if (L1) Require(gamma < num_players / *L1, "gamma < N/L1");
  Require(batch_scale > 0, "batch_scale > 0");
  Require(batch_cap >= 0 && inner_cap >= 0, "caps >= 0");
}

Profile YcExact(const GameModel& game, double c, const Profile& x) {
  Require(c > 0, "c > 0");
  return x.WithData(
      Project(game.joint_feasible(), x.data() - MapAt(game, x) / c));
}

double ThetaC(const GameModel& game, double c, const Profile& x) {
  Require(c > 0, "c > 0");
  Vector F = MapAt(game, x);
  Vector d = x.data() - Project(game.joint_feasible(), x.data() - F / c);
  return F.dot(d) - 0.5 * c * d.squaredNorm();
}

double ThetaCTilde(const GameModel& game, double c, const Profile& x,
                   const Profile& y, std::span<const double> xi) {
  Vector d = x.data() - y.data();
  return game.SampleMap(x, xi).dot(d) - 0.5 * c * d.squaredNorm();
}

Profile SaInner(const GameModel& game, double c, const Profile& x_hat,
                int t_k, double alpha0, double Gamma, const Profile& y0,
                RngStream& rng) {
  Require(alpha0 > 1.0 / (2.0 * c), "alpha0 > 1/(2c)");
  Require(t_k >= 1, "t_k >= 1");
  Require(Gamma > 0, "Gamma > 0");
  const FeasibleSet& X = game.joint_feasible();
  const bool box = IsPlainBox(X);
  const Vector lo = box ? X.lower() : Vector();
  const Vector hi = box ? X.upper() : Vector();
  Vector y = y0.data();
  const Vector& xh = x_hat.data();
  Vector g(xh.size());
  Draw xi;
  for (int t = 0; t < t_k; ++t) {
    game.noise().SampleInto(rng, xi);
    game.SampleMapInto(x_hat, xi, g);
    const double alpha = alpha0 / (t + Gamma);
    y.noalias() -= alpha * (g + c * (y - xh));
    if (box) {
      y = y.cwiseMax(lo).cwiseMin(hi);
    } else {
      y = Project(X, y);
    }
  }
  return y0.WithData(std::move(y));
}

double InnerErrorConstant(double c, double alpha0, double Gamma, double cF_sq,
                          double vG_sq, double D2) {
  Require(alpha0 > 1.0 / (2.0 * c), "alpha0 > 1/(2c)");
  double first = (cF_sq + vG_sq) * alpha0 * alpha0 / (2.0 * c * alpha0 - 1.0);
  return std::max(first, Gamma * D2);
}

Schedule Schedules(int k, int n, const GapConfig& cfg) {
  Require(k >= 0, "k >= 0");
  Require(n >= 1, "n >= 1");
  const double nn = n, kk = k + 1.0;
  Schedule s;
  s.N_k = static_cast<long long>(
      std::ceil(std::pow(nn, cfg.a) * std::pow(kk, 1.0 + cfg.delta)));
  s.eta_k = std::pow(nn, -cfg.b) * std::pow(kk, -(0.5 + cfg.delta));
  s.t_k = static_cast<long long>(
      std::ceil(std::pow(nn, cfg.e) * std::pow(kk, 2.0 + 3.0 * cfg.delta)));
  return s;
}

Schedule EffectiveSchedules(int k, int n, const GapConfig& cfg) {
  Schedule s = Schedules(k, n, cfg);
  const double nn = n, kk = k + 1.0;
  s.N_k = static_cast<long long>(std::ceil(
      cfg.batch_scale * std::pow(nn, cfg.a) * std::pow(kk, 1.0 + cfg.delta)));
  if (cfg.batch_cap > 0) s.N_k = std::min<long long>(s.N_k, cfg.batch_cap);
  if (cfg.inner_cap > 0) s.t_k = std::min<long long>(s.t_k, cfg.inner_cap);
  s.N_k = std::max<long long>(s.N_k, 1);
  return s;
}

Vector SampleSphere(double eta, int n, RngStream& rng) {
  Require(eta > 0, "eta > 0");
  Require(n >= 1, "n >= 1");
  Vector v(n);
  double norm = 0.0;
  do {
    for (int j = 0; j < n; ++j) v[j] = rng.Normal();
    norm = v.norm();
  } while (norm == 0.0);
  return v * (eta / norm);
}

Vector ZoFullEstimate(const GameModel& game, const GapConfig& cfg,
                      const Profile& x, const Vector& v,
                      std::span<const double> xi, const Profile& y_plus,
                      const Profile& y_minus) {
  const double eta = v.norm();
  Require(eta > 0, "v must be nonzero");
  Profile xp = x.WithData(x.data() + v);
  Profile xm = x.WithData(x.data() - v);
  double diff = ThetaCTilde(game, cfg.c, xp, y_plus, xi) -
                ThetaCTilde(game, cfg.c, xm, y_minus, xi);
  return (x.size() * diff / (2.0 * eta * eta)) * v;
}

Vector ZoPartialEstimate(const GameModel& game, const GapConfig& cfg,
                         const Profile& x, int i, const Vector& v,
                         std::span<const double> xi, const Profile& y_plus,
                         const Profile& y_minus) {
  return ZoFullEstimate(game, cfg, x, v, xi, y_plus, y_minus)
      .segment(x.offset(i), x.block_size(i));
}

Vector ResidualMap(const GameModel& game, double beta, const Profile& x,
                   const Vector& grad_theta) {
  Require(beta > 0, "beta > 0");
  return beta *
         (x.data() - Project(game.joint_feasible(), x.data() - grad_theta / beta));
}

Vector GradThetaExact(const GameModel& game, double c, const Profile& x) {
  if (!game.has_jacobian()) {
    throw UnsupportedOperation(game.name() + ": gradient of theta needs JF");
  }
  Vector F = MapAt(game, x);
  Vector d = x.data() - Project(game.joint_feasible(), x.data() - F / c);
  return F + game.JacobianOfExpectedMap(x).transpose() * d - c * d;
}

ZamgrResult ZamgrRun(const GameModel& game, const GapConfig& cfg,
                     const Profile& x0, int K, const RngStream& rng,
                     const std::optional<ReferenceSolution>& reference,
                     const ZamgrOptions& options) {
  const int N = game.num_players();
  const int n = game.total_dim();
  cfg.Validate(N);
  Require(K >= static_cast<int>(std::ceil(2.0 / (1.0 - cfg.lambda))),
          "K >= ceil(2/(1-lambda))");
  Require(options.record_every >= 1, "record_every >= 1");
  if (!game.IsFeasibleProfile(x0, 1e-10)) {
    throw InvalidArgument("x0 is not feasible");
  }
  const FeasibleSet& X = game.joint_feasible();

  ZamgrResult out;
  RngStream pick = rng.Substream(0, kRoleOutput);
  const int first = static_cast<int>(std::ceil(cfg.lambda * K));
  out.R = first + static_cast<int>(pick.UniformInt(K - first + 1));

  Profile x = x0;
  Trajectory& t = out.trajectory;
  auto record = [&](int k) {
    t.iterations.push_back(k);
    if (reference) {
      t.sq_error.push_back((x.data() - reference->x_star.data()).squaredNorm());
    }
  };
  record(0);
  if (out.R == 0) out.x_R = x;

  for (int k = 0; k < K; ++k) {
    RngStream sel = rng.Substream(k, kRoleSelect);
    const int i = static_cast<int>(sel.UniformInt(N));
    Vector g;
    if (options.gradient == ZamgrGradient::kOracle) {
      g = GradThetaExact(game, cfg.c, x).segment(x.offset(i), x.block_size(i));
    } else {
      Schedule s = EffectiveSchedules(k, n, cfg);
      g = Vector::Zero(x.block_size(i));
      for (long long j = 0; j < s.N_k; ++j) {
        RngStream sample = rng.Substream(k, kRoleSampleBase + 4 * j);
        Vector v = SampleSphere(s.eta_k, n, sample);
        Draw xi = game.noise().Sample(sample);
        Profile xp = x.WithData(x.data() + v);
        Profile xm = x.WithData(x.data() - v);
        Profile yp, ym;
        if (options.gradient == ZamgrGradient::kExactInner) {
          yp = YcExact(game, cfg.c, xp);
          ym = YcExact(game, cfg.c, xm);
        } else {
          RngStream inner_p = rng.Substream(k, kRoleSampleBase + 4 * j + 1);
          RngStream inner_m =
              cfg.common_inner_noise
                  ? inner_p
                  : rng.Substream(k, kRoleSampleBase + 4 * j + 2);
          const int tk = static_cast<int>(s.t_k);
          yp = SaInner(game, cfg.c, xp, tk, cfg.alpha0, cfg.Gamma,
                       xp.WithData(Project(X, xp.data())), inner_p);
          ym = SaInner(game, cfg.c, xm, tk, cfg.alpha0, cfg.Gamma,
                       xm.WithData(Project(X, xm.data())), inner_m);
          out.inner_steps += 2 * s.t_k;
        }
        g += ZoPartialEstimate(game, cfg, x, i, v, xi, yp, ym);
      }
      g /= static_cast<double>(s.N_k);
      out.samples_used += s.N_k;
    }
    x.block(i) = Project(game.feasible(i), x.block(i) - cfg.gamma * g);
    if (options.observer) options.observer(x, k + 1, i);
    if ((k + 1) % options.record_every == 0 || k + 1 == K) record(k + 1);
    if (k + 1 == out.R) out.x_R = x;
  }
  t.final_x = x;
  return out;
}

}  // namespace qne
