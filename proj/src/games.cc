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

#include "qne/games.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qne/errors.h"

namespace qne {
namespace {

std::vector<FeasibleSet> NetworkSets(const NetworkParams& p) {
  std::vector<FeasibleSet> sets;
  for (const Vector& a : p.conservation) {
    sets.push_back(FeasibleSet::MakeBoxHyperplane(p.lb, p.ub, a, 0.0));
  }
  return sets;
}

NoiseLaw NetworkNoise(const NetworkParams& p) {
  NoiseLaw law;
  for (int l = 0; l < p.lb.size(); ++l) law.uniform.push_back({p.b_low, p.b_high});
  law.uniform.push_back({-p.beta_spread, p.beta_spread});
  return law;
}

std::vector<FeasibleSet> Intervals(int n, double lo, double hi) {
  return std::vector<FeasibleSet>(n, FeasibleSet::MakeInterval(lo, hi));
}

}  // namespace

NetworkParams DefaultNetworkParams() {
  NetworkParams p;
  p.lb.resize(6);
  p.ub.resize(6);
  p.lb << 4.0, 4.2, 4.4, 4.6, 4.8, 5.0;
  p.ub << 11.0, 10.8, 10.6, 10.4, 10.2, 10.0;
  Vector a(6);
  a << -1, -1, 0, 0, 0, 1;  // x6 = x1 + x2
  p.conservation.push_back(a);
  a << 1, 0, -1, 0, -1, 0;  // x1 = x3 + x5
  p.conservation.push_back(a);
  a << 0, 1, 0, -1, 1, 0;  // x2 + x5 = x4
  p.conservation.push_back(a);
  a << 0, 0, 1, 1, 0, -1;  // x3 + x4 = x6
  p.conservation.push_back(a);
  return p;
}

NetworkCongestionGame::NetworkCongestionGame(NetworkParams params)
    : GameModel("network", NetworkSets(params), NetworkNoise(params)),
      p_(std::move(params)) {
  if (!(p_.M > 0.0) || !(p_.b_low <= p_.b_high) || !(p_.beta_spread >= 0.0)) {
    throw InvalidArgument("network: bad M, b law or beta law");
  }
  for (int l = 0; l < num_links(); ++l) {
    if (LinkNormRange(l).second >= p_.b_low) {
      throw InvalidArgument("network: link " + std::to_string(l + 1) +
                            " flow can reach capacity");
    }
  }
}

std::pair<double, double> NetworkCongestionGame::LinkNormRange(int l) const {
  double root_n = std::sqrt(static_cast<double>(num_players()));
  double lo = p_.lb[l], hi = p_.ub[l];
  double min_abs = (lo <= 0.0 && hi >= 0.0) ? 0.0
                                            : std::min(std::abs(lo), std::abs(hi));
  double max_abs = std::max(std::abs(lo), std::abs(hi));
  return {root_n * min_abs, root_n * max_abs};
}

Vector NetworkCongestionGame::LinkFlows(const Profile& x, int l) const {
  Vector v(num_players());
  for (int i = 0; i < num_players(); ++i) v[i] = x.block(i)[l];
  return v;
}

double NetworkCongestionGame::LinkNorm(const Profile& x, int l) const {
  double s = LinkFlows(x, l).norm();
  if (s >= p_.b_low) {
    throw DomainError("network: link flow at or above capacity");
  }
  return s;
}

double NetworkCongestionGame::ExpectedMultiplier(double s) const {
  double width = p_.b_high - p_.b_low;
  double inv_sq = width > 0.0
                      ? (1.0 / (p_.b_low - s) - 1.0 / (p_.b_high - s)) / width
                      : 1.0 / ((p_.b_low - s) * (p_.b_low - s));
  return p_.M * inv_sq / s - p_.beta_mean;
}

double NetworkCongestionGame::ExpectedCongestion(double s) const {
  double width = p_.b_high - p_.b_low;
  if (width == 0.0) return p_.M / (p_.b_low - s);
  return p_.M * std::log((p_.b_high - s) / (p_.b_low - s)) / width;
}

double NetworkCongestionGame::LinkSpConstant(int l) const {
  auto [lo, hi] = LinkNormRange(l);
  lo = std::max(lo, 1e-9);
  constexpr int kGrid = 4000;
  double best_s = lo, best = ExpectedMultiplier(lo);
  for (int k = 1; k <= kGrid; ++k) {
    double s = lo + (hi - lo) * k / kGrid;
    double m = ExpectedMultiplier(s);
    if (m < best) best = m, best_s = s;
  }
  double h = (hi - lo) / kGrid;
  double a = std::max(lo, best_s - h), b = std::min(hi, best_s + h);
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 200; ++it) {
    double c = b - r * (b - a), d = a + r * (b - a);
    if (ExpectedMultiplier(c) < ExpectedMultiplier(d)) b = d; else a = c;
  }
  return std::min(best, ExpectedMultiplier(0.5 * (a + b)));
}

double NetworkCongestionGame::LinkCoarseBound(int l) const {
  auto [lo, hi] = LinkNormRange(l);
  return p_.M / (hi * (p_.b_high - lo) * (p_.b_high - lo)) - p_.beta_mean;
}

Vector NetworkCongestionGame::SamplePartialGrad(
    int i, const Profile& x, std::span<const double> draw) const {
  const int L = num_links();
  Vector g(L);
  double beta = p_.beta_mean + draw[L];
  for (int l = 0; l < L; ++l) {
    double s = LinkNorm(x, l);
    double xil = x.block(i)[l];
    if (s == 0.0) {
      g[l] = 0.0;
      continue;
    }
    double gap = draw[l] - s;
    if (gap <= 0.0) throw DomainError("network: sampled capacity exceeded");
    g[l] = (p_.M / (s * gap * gap) - beta) * xil;
  }
  return g;
}

Vector NetworkCongestionGame::ExpectedMap(const Profile& x) const {
  const int L = num_links();
  Vector F(total_dim());
  for (int l = 0; l < L; ++l) {
    double s = LinkNorm(x, l);
    double m = s > 0.0 ? ExpectedMultiplier(s) : 0.0;
    for (int i = 0; i < num_players(); ++i) {
      F[x.offset(i) + l] = m * x.block(i)[l];
    }
  }
  return F;
}

double NetworkCongestionGame::Potential(const Profile& x) const {
  double total = 0.0;
  for (int l = 0; l < num_links(); ++l) {
    total += ExpectedCongestion(LinkNorm(x, l));
    for (int i = 0; i < num_players(); ++i) {
      double v = x.block(i)[l];
      total -= 0.5 * p_.beta_mean * v * v;
    }
  }
  return total;
}

double NetworkCongestionGame::Objective(int i, const Profile& x) const {
  double total = 0.0;
  for (int l = 0; l < num_links(); ++l) {
    double v = x.block(i)[l];
    total += ExpectedCongestion(LinkNorm(x, l)) - 0.5 * p_.beta_mean * v * v;
  }
  return total;
}

CournotGame::CournotGame(CournotParams params)
    : GameModel("cournot", Intervals(params.N, params.lower, params.upper), {}),
      p_(params) {
  if (!(p_.c > 0.0 && p_.a > 0.0 && p_.b > 0.0)) {
    throw InvalidArgument("cournot: c, a, b must be positive");
  }
  if (!(p_.lower > 0.0)) {
    throw InvalidArgument("cournot: lower bound must be positive");
  }
}

double CournotGame::Partial(int i, const Vector& x, double xbar) const {
  if (!(x[i] > 0.0)) throw DomainError("cournot: nonpositive quantity");
  return p_.c / x[i] - p_.a + p_.b * (xbar + x[i]);
}

Vector CournotGame::SamplePartialGrad(int i, const Profile& x,
                                      std::span<const double>) const {
  return Vector::Constant(1, Partial(i, x.data(), x.data().sum()));
}

Vector CournotGame::ExpectedMap(const Profile& x) const {
  double xbar = x.data().sum();
  Vector F(p_.N);
  for (int i = 0; i < p_.N; ++i) F[i] = Partial(i, x.data(), xbar);
  return F;
}

Matrix CournotGame::JacobianOfExpectedMap(const Profile& x) const {
  Matrix J = Matrix::Constant(p_.N, p_.N, p_.b);
  for (int i = 0; i < p_.N; ++i) {
    double xi = x.data()[i];
    J(i, i) = -p_.c / (xi * xi) + 2.0 * p_.b;
  }
  return J;
}

double CournotGame::Potential(const Profile& x) const {
  const Vector& v = x.data();
  double sum = v.sum();
  double total = 0.5 * p_.b * (sum * sum + v.squaredNorm()) - p_.a * sum;
  for (int i = 0; i < p_.N; ++i) {
    if (!(v[i] > 0.0)) throw DomainError("cournot: nonpositive quantity");
    total += p_.c * std::log(v[i]);
  }
  return total;
}

double CournotGame::Objective(int i, const Profile& x) const {
  const Vector& v = x.data();
  if (!(v[i] > 0.0)) throw DomainError("cournot: nonpositive quantity");
  return p_.c * std::log(v[i]) - (p_.a - p_.b * v.sum()) * v[i];
}

GameConstants CournotGame::constants() const {
  GameConstants k;
  if (std::isfinite(p_.upper)) {
    // |J| <= max row sum: c/lower^2 - 2b on the diagonal plus (N-1) b.
    double diag = std::max(std::abs(p_.c / (p_.lower * p_.lower) - 2.0 * p_.b),
                           std::abs(p_.c / (p_.upper * p_.upper) - 2.0 * p_.b));
    k.lipschitz = diag + (p_.N - 1) * p_.b + p_.b;
    // F_i is largest at x_i = lower with the others at upper.
    double xbar = p_.lower + (p_.N - 1) * p_.upper;
    double fmax = p_.c / p_.lower - p_.a + p_.b * (xbar + p_.lower);
    k.grad_bound_sq = p_.N * fmax * fmax;
  }
  // x* = (lower, ..., lower); F(x*) componentwise equals the WS constant.
  Vector lo = Vector::Constant(p_.N, p_.lower);
  k.weak_sharpness = Partial(0, lo, lo.sum());
  return k;
}

CopositiveCongestionGame::CopositiveCongestionGame(CopositiveParams params)
    : GameModel("copositive", Intervals(params.N, params.lower, params.upper),
                NoiseLaw{std::vector<std::pair<double, double>>(
                    params.N, {-params.xi_spread, params.xi_spread})}),
      p_(params) {}

Vector CopositiveCongestionGame::SamplePartialGrad(
    int i, const Profile& x, std::span<const double> draw) const {
  const Vector& v = x.data();
  double others = 0.0;
  for (int j = 0; j < p_.N; ++j) {
    if (j != i) others += G(v[j]);
  }
  double xi = draw.empty() ? 0.0 : draw[i];
  return Vector::Constant(1, v[i] - p_.mean_utility - xi + others);
}

void CopositiveCongestionGame::SampleMapInto(const Profile& x,
                                             std::span<const double> draw,
                                             Vector& out) const {
  const Vector& v = x.data();
  double total = 0.0;
  for (int j = 0; j < p_.N; ++j) total += G(v[j]);
  out.resize(p_.N);
  for (int i = 0; i < p_.N; ++i) {
    double xi = draw.empty() ? 0.0 : draw[i];
    out[i] = v[i] - p_.mean_utility - xi + (total - G(v[i]));
  }
}

Vector CopositiveCongestionGame::ExpectedMap(const Profile& x) const {
  const Vector& v = x.data();
  double total = 0.0;
  for (int j = 0; j < p_.N; ++j) total += G(v[j]);
  Vector F(p_.N);
  for (int i = 0; i < p_.N; ++i) {
    F[i] = v[i] - p_.mean_utility + (total - G(v[i]));
  }
  return F;
}

Matrix CopositiveCongestionGame::JacobianOfExpectedMap(const Profile& x) const {
  const Vector& v = x.data();
  Matrix J(p_.N, p_.N);
  for (int i = 0; i < p_.N; ++i) {
    for (int j = 0; j < p_.N; ++j) J(i, j) = i == j ? 1.0 : v[j] - 10.0;
  }
  return J;
}

double CopositiveCongestionGame::Objective(int i, const Profile& x) const {
  const Vector& v = x.data();
  double others = 0.0;
  for (int j = 0; j < p_.N; ++j) {
    if (j != i) others += G(v[j]);
  }
  return 0.5 * v[i] * v[i] - p_.mean_utility * v[i] + v[i] * others;
}

std::shared_ptr<MapGame> NetworkLinkGame(const NetworkCongestionGame& game,
                                         int link) {
  auto copy = std::make_shared<NetworkCongestionGame>(game.params());
  const double lo = game.params().lb[link], hi = game.params().ub[link];
  auto map = [copy](const Vector& v) -> Vector {
    double s = v.norm();
    if (s == 0.0) return Vector::Zero(v.size());
    return copy->ExpectedMultiplier(s) * v;
  };
  return std::make_shared<MapGame>(
      "network_link_" + std::to_string(link + 1),
      Intervals(game.num_players(), lo, hi), map);
}

Vector NetworkExpectedMap(const NetworkCongestionGame& game, const Profile& x) {
  return game.ExpectedMap(x);
}
Vector CournotExpectedMap(const CournotGame& game, const Profile& x) {
  return game.ExpectedMap(x);
}
Vector CopositiveExpectedMap(const CopositiveCongestionGame& game,
                             const Profile& x) {
  return game.ExpectedMap(x);
}
Matrix CopositiveJacobian(const CopositiveCongestionGame& game,
                          const Profile& x) {
  return game.JacobianOfExpectedMap(x);
}

double NaturalResidual(const GameModel& game, const Profile& x) {
  Vector F = game.ExpectedMap(x);
  return (x.data() - Project(game.joint_feasible(), x.data() - F)).norm();
}

ReferenceSolution NetworkReferenceSolution(const NetworkCongestionGame& game,
                                           double tol, int max_iters) {
  if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
  const FeasibleSet& X = game.joint_feasible();
  Vector mid = 0.5 * (game.params().lb + game.params().ub);
  Vector start(game.total_dim());
  for (int i = 0; i < game.num_players(); ++i) start.segment(i * mid.size(), mid.size()) = mid;
  Profile x = game.MakeProfile(Project(X, start));
  double step = 0.5;
  double best = NaturalResidual(game, x);
  for (int it = 0; it < max_iters; ++it) {
    if (best <= tol) return ReferenceSolution::OracleComputed(x, tol);
    Profile next =
        x.WithData(Project(X, x.data() - step * game.ExpectedMap(x)));
    double r = NaturalResidual(game, next);
    if (r < best) {
      x = std::move(next);
      best = r;
      step = std::min(1.0, step * 1.2);
    } else {
      step *= 0.5;
      if (step < 1e-12) break;
    }
  }
  throw OracleFailure("network reference solution did not reach tolerance");
}

ReferenceSolution CournotReferenceSolution(const CournotGame& game) {
  return ReferenceSolution::Analytic(game.MakeProfile(
      Vector::Constant(game.params().N, game.params().lower)));
}

ReferenceSolution CopositiveReferenceSolution(
    const CopositiveCongestionGame& game) {
  return ReferenceSolution::Analytic(
      game.MakeProfile(Vector::Constant(game.params().N, 10.0)));
}

std::shared_ptr<GameModel> MakePresetGame(const std::string& name) {
  if (name == "network") return std::make_shared<NetworkCongestionGame>();
  if (name == "cournot") return std::make_shared<CournotGame>();
  if (name == "copositive") return std::make_shared<CopositiveCongestionGame>();
  throw ConfigError("unknown game preset: " + name);
}

std::vector<std::string> PresetGameNames() {
  return {"network", "cournot", "copositive"};
}

}  // namespace qne
