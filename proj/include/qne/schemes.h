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

#ifndef QNE_SCHEMES_H_
#define QNE_SCHEMES_H_

#include <functional>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "qne/game.h"
#include "qne/rng.h"

namespace qne {

struct Diminishing {
  double gamma0 = 1.0;
};
struct Constant {
  double delta = 0.1;
};
// Step k (k >= 1) uses gamma0 q^(k-1), so x^k sits under gamma0 q^k decay.
struct Geometric {
  double gamma0 = 1.0;
  double q = 0.5;
};
// scale / Gamma_k(i); scale = 1 is the harmonic rule of Algorithm 2.
struct AsyncHarmonic {
  double scale = 1.0;
};
struct TwoStage {
  Diminishing stage1;
  Geometric stage2;
  int switch_iter = 1;
};

using StepsizePolicy =
    std::variant<Diminishing, Constant, Geometric, AsyncHarmonic, TwoStage>;

// Throws InvalidArgument when a parameter is out of range.
void ValidatePolicy(const StepsizePolicy& policy);

// Stepsize of synchronous step k >= 1. Not defined for AsyncHarmonic.
double PolicyStepsize(const StepsizePolicy& policy, int k);

struct UpdateCounters {
  std::vector<int> counts;
  int iteration = 0;

  static UpdateCounters Zero(int num_players) {
    return {std::vector<int>(num_players, 0), 0};
  }
};

// 1/counts[i] if player i has updated, otherwise 0.
double AsyncStepsize(const UpdateCounters& counters, int i);

// Simultaneous projected stochastic gradient step, one fresh draw per player.
Profile SsgrStep(const GameModel& game, const Profile& x, double gamma,
                 RngStream& rng);

struct SagrResult {
  Profile x;
  UpdateCounters counters;
  int selected = 0;
  double gamma = 0.0;
};

// One asynchronous step: pick i ~ probs, bump its counter, move block i with
// stepsize scale/Gamma_k(i) (or fixed_gamma when given).
SagrResult SagrStep(const GameModel& game, const Profile& x,
                    const UpdateCounters& counters,
                    const std::vector<double>& probs, RngStream& rng,
                    double scale = 1.0,
                    std::optional<double> fixed_gamma = std::nullopt);

// Deterministic step with the supplied map.
Profile SgrStep(const GameModel& game, const Profile& x, double gamma,
                const DeterministicMap& map);
// Same, with the game's own expected map.
Profile SgrStep(const GameModel& game, const Profile& x, double gamma);

// (gamma0, q) from the two-case rule for the local linear rate.
std::pair<double, double> GeometricParams(double e0, double delta, double beta,
                                          double L, double M, int N);
// e0 = (1 - delta) beta / (N L).
double LinearRateRadius(double delta, double beta, double L, int N);

double QBound(double gamma0, double alpha, double M_total, double e1);

// ceil(Q / (N e0^2)), at least 1.
int TwoStageSwitchIter(double Q, int N, double e0);

// e_1 = e0 and e_k = (1 - c/k + A/k^(1+p)) e_{k-1} + B/k^(1+p) for k >= 2.
// Entry k-1 holds e_k.
std::vector<double> ChungRecursionOracle(double c, double A, double B,
                                         double p, double e0, int iters);

enum class Scheme { kSsgr, kSagr, kSgr };

struct StepInfo {
  int k = 0;
  double gamma = 0.0;
  int selected = -1;  // SAGR only
  const UpdateCounters* counters = nullptr;  // SAGR only
};

struct RunOptions {
  int record_every = 1;
  // Selection probabilities for SAGR; empty means uniform.
  std::vector<double> probs;
  // Used by SGR when the game has no expected map.
  std::optional<SampleAverageOptions> sample_average;
  // Called after every step with the new iterate.
  std::function<void(const Profile&, const StepInfo&)> observer;
};

struct Trajectory {
  std::vector<int> iterations;     // recorded k, starting with 0
  std::vector<double> sq_error;    // |x^k - x*|^2, empty without reference
  Profile final_x;
  UpdateCounters counters;         // SAGR only
};

Trajectory RunScheme(const GameModel& game, Scheme scheme,
                     const StepsizePolicy& policy, const Profile& x0,
                     int iters, const RngStream& rng,
                     const std::optional<ReferenceSolution>& reference,
                     const RunOptions& options = {});

}  // namespace qne

#endif  // QNE_SCHEMES_H_
