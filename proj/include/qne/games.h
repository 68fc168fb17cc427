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

#ifndef QNE_GAMES_H_
#define QNE_GAMES_H_

#include <memory>
#include <string>
#include <vector>

#include "qne/game.h"
#include "qne/projection.h"

namespace qne {

// Congestion game over a fixed set of links. Player i ships x_i^l on link l
// and pays sum_l M/(b^l - |x^l|) - beta (x_i^l)^2/2, where |x^l| is the
// Euclidean norm of the link flows across players, b^l ~ U[b_low, b_high]
// and beta = beta_mean + xi with xi ~ U[-beta_spread, beta_spread].
struct NetworkParams {
  double M = 5e4;
  double b_low = 44.0;
  double b_high = 45.0;
  double beta_mean = 3.4;
  double beta_spread = 0.2;
  Vector lb;  // per link
  Vector ub;  // per link
  // One flow-conservation hyperplane a_i^T x_i = 0 per player.
  std::vector<Vector> conservation;
};

// The four-node, six-link preset.
NetworkParams DefaultNetworkParams();

class NetworkCongestionGame : public GameModel {
 public:
  explicit NetworkCongestionGame(NetworkParams params = DefaultNetworkParams());

  const NetworkParams& params() const { return p_; }
  int num_links() const { return static_cast<int>(p_.lb.size()); }

  // Link-major view: the N flows on link l.
  Vector LinkFlows(const Profile& x, int link) const;
  // E_b[M/(s (b - s)^2)] - E[beta], the factor multiplying x^l in F.
  double ExpectedMultiplier(double s) const;
  // min of ExpectedMultiplier over the attainable range of |x^l|.
  double LinkSpConstant(int link) const;
  // M/(s_max (b_high - s_min)^2) - E[beta]: a closed-form lower bound on the
  // multiplier from the norm range. Can be negative (then it certifies nothing).
  double LinkCoarseBound(int link) const;
  // Range [s_min, s_max] of |x^l| over the box.
  std::pair<double, double> LinkNormRange(int link) const;

  Vector SamplePartialGrad(int i, const Profile& x,
                           std::span<const double> draw) const override;
  bool has_expected_map() const override { return true; }
  Vector ExpectedMap(const Profile& x) const override;
  bool has_potential() const override { return true; }
  double Potential(const Profile& x) const override;
  bool has_objective() const override { return true; }
  double Objective(int i, const Profile& x) const override;

 private:
  double LinkNorm(const Profile& x, int link) const;
  double ExpectedCongestion(double s) const;

  NetworkParams p_;
};

struct CournotParams {
  int N = 4;
  double c = 400.0;
  double a = 2.0;
  double b = 0.01;
  double lower = 20.0;
  double upper = 100.0;  // +infinity gives the untruncated game
};

// f_i(x) = c ln(x_i) - (a - b xbar) x_i with xbar = sum_j x_j. Deterministic.
class CournotGame : public GameModel {
 public:
  explicit CournotGame(CournotParams params = {});

  const CournotParams& params() const { return p_; }

  Vector SamplePartialGrad(int i, const Profile& x,
                           std::span<const double> draw) const override;
  bool has_expected_map() const override { return true; }
  Vector ExpectedMap(const Profile& x) const override;
  bool has_jacobian() const override { return true; }
  Matrix JacobianOfExpectedMap(const Profile& x) const override;
  bool has_potential() const override { return true; }
  double Potential(const Profile& x) const override;
  bool has_objective() const override { return true; }
  double Objective(int i, const Profile& x) const override;
  GameConstants constants() const override;

 private:
  double Partial(int i, const Vector& x, double xbar) const;

  CournotParams p_;
};

struct CopositiveParams {
  int N = 8;
  double lower = 0.0;
  double upper = 20.0;
  double mean_utility = 80.0;
  double xi_spread = 2.0;
};

// f_i(x) = x_i^2/2 - (80 + xi_i) x_i + x_i sum_{j != i} g(x_j) with
// g(t) = t^2/2 - 10 t + 60.
class CopositiveCongestionGame : public GameModel {
 public:
  explicit CopositiveCongestionGame(CopositiveParams params = {});

  const CopositiveParams& params() const { return p_; }
  static double G(double t) { return 0.5 * t * t - 10.0 * t + 60.0; }

  Vector SamplePartialGrad(int i, const Profile& x,
                           std::span<const double> draw) const override;
  void SampleMapInto(const Profile& x, std::span<const double> draw,
                     Vector& out) const override;
  bool has_expected_map() const override { return true; }
  Vector ExpectedMap(const Profile& x) const override;
  bool has_jacobian() const override { return true; }
  // Entry (i, j) is dF_i/dx_j.
  Matrix JacobianOfExpectedMap(const Profile& x) const override;
  bool has_objective() const override { return true; }
  double Objective(int i, const Profile& x) const override;

 private:
  CopositiveParams p_;
};

// The link-l map F_l(v) = m(|v|) v over the box [lb_l, ub_l]^N, as a game
// with one scalar player per original player.
std::shared_ptr<MapGame> NetworkLinkGame(const NetworkCongestionGame& game,
                                         int link);

Vector NetworkExpectedMap(const NetworkCongestionGame& game, const Profile& x);
Vector CournotExpectedMap(const CournotGame& game, const Profile& x);
Vector CopositiveExpectedMap(const CopositiveCongestionGame& game,
                             const Profile& x);
Matrix CopositiveJacobian(const CopositiveCongestionGame& game,
                          const Profile& x);

// Projected gradient on the expected map until the natural residual
// |x - P(x - F(x))| <= tol. Throws OracleFailure past max_iters.
ReferenceSolution NetworkReferenceSolution(const NetworkCongestionGame& game,
                                           double tol,
                                           int max_iters = 2000000);

ReferenceSolution CournotReferenceSolution(const CournotGame& game);
ReferenceSolution CopositiveReferenceSolution(
    const CopositiveCongestionGame& game);

// |x - P_X(x - F(x))| for a game with an expected map.
double NaturalResidual(const GameModel& game, const Profile& x);

// Preset lookup: "network", "cournot", "copositive".
std::shared_ptr<GameModel> MakePresetGame(const std::string& name);
std::vector<std::string> PresetGameNames();

}  // namespace qne

#endif  // QNE_GAMES_H_
