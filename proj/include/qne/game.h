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

#ifndef QNE_GAME_H_
#define QNE_GAME_H_

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qne/profile.h"
#include "qne/projection.h"
#include "qne/rng.h"

namespace qne {

// One realization of a game's randomness, as raw coordinates of its noise
// law. The game maps a draw to gradient perturbations.
using Draw = std::vector<double>;

// Product of independent uniform laws U[lo_j, hi_j]. An empty law (or
// degenerate intervals) means zero-variance sampling.
struct NoiseLaw {
  std::vector<std::pair<double, double>> uniform;

  int dim() const { return static_cast<int>(uniform.size()); }
  Draw Sample(RngStream& rng) const;
  // Refills d (resized to dim()) without reallocating.
  void SampleInto(RngStream& rng, Draw& d) const;
  // Draw with every coordinate at the mean of its interval.
  Draw Mean() const;
};

// Problem constants a game may know in closed form. Empty when unknown.
struct GameConstants {
  std::optional<double> lipschitz;     // L with |F(x) - F(y)| <= L|x - y|
  std::optional<double> grad_bound_sq; // M2 >= sum_i |F_i(x)|^2 over X
  std::optional<double> weak_sharpness;  // beta of (WS) at the reference
};

// An N-player game min_{x_i in X_i} E[f_i(x_i, x_-i, xi)]. Implementations
// are immutable after construction and safe to share across threads.
class GameModel {
 public:
  GameModel(std::string name, std::vector<FeasibleSet> player_sets,
            NoiseLaw noise);
  virtual ~GameModel() = default;

  const std::string& name() const { return name_; }
  int num_players() const { return static_cast<int>(dims_.size()); }
  const std::vector<int>& dims() const { return dims_; }
  int total_dim() const { return joint_.dim(); }
  const FeasibleSet& feasible(int i) const { return player_sets_[i]; }
  // X = X_1 x ... x X_N.
  const FeasibleSet& joint_feasible() const { return joint_; }
  const NoiseLaw& noise() const { return noise_; }

  // Profile with this game's block layout.
  Profile MakeProfile(Vector data) const;
  Profile ProjectProfile(const Profile& x) const;
  bool IsFeasibleProfile(const Profile& x, double tol) const;

  // Stochastic partial gradient of f_i in x_i at one draw. Length dims()[i].
  virtual Vector SamplePartialGrad(int i, const Profile& x,
                                   std::span<const double> draw) const = 0;
  // Concatenated sampled map F~(x, draw), every block using the same draw.
  Vector SampleMap(const Profile& x, std::span<const double> draw) const;
  // SampleMap into a preallocated vector of length total_dim().
  virtual void SampleMapInto(const Profile& x, std::span<const double> draw,
                             Vector& out) const;

  // Exact F(x) = (grad_{x_i} E f_i)_i when known.
  virtual bool has_expected_map() const { return false; }
  virtual Vector ExpectedMap(const Profile& x) const;

  virtual bool has_jacobian() const { return false; }
  virtual Matrix JacobianOfExpectedMap(const Profile& x) const;

  virtual bool has_potential() const { return false; }
  virtual double Potential(const Profile& x) const;

  // Expected objective f_i(x); used by potentiality checks.
  virtual bool has_objective() const { return false; }
  virtual double Objective(int i, const Profile& x) const;

  virtual GameConstants constants() const { return {}; }

 private:
  std::string name_;
  std::vector<FeasibleSet> player_sets_;
  std::vector<int> dims_;
  FeasibleSet joint_;
  NoiseLaw noise_;
};

// A game given by closures, for synthetic instances. The sampled map is the
// expected map plus additive noise whose coordinates are the draw entries
// (the noise law must have total_dim coordinates or be empty).
class MapGame : public GameModel {
 public:
  using MapFn = std::function<Vector(const Vector&)>;
  using JacobianFn = std::function<Matrix(const Vector&)>;
  using ScalarFn = std::function<double(const Vector&)>;
  using ObjectiveFn = std::function<double(int, const Vector&)>;

  MapGame(std::string name, std::vector<FeasibleSet> player_sets,
          MapFn expected_map, NoiseLaw additive_noise = {});

  MapGame& set_jacobian(JacobianFn fn);
  MapGame& set_potential(ScalarFn fn);
  MapGame& set_objective(ObjectiveFn fn);
  MapGame& set_constants(GameConstants c);

  Vector SamplePartialGrad(int i, const Profile& x,
                           std::span<const double> draw) const override;
  bool has_expected_map() const override { return true; }
  Vector ExpectedMap(const Profile& x) const override;
  bool has_jacobian() const override { return static_cast<bool>(jacobian_); }
  Matrix JacobianOfExpectedMap(const Profile& x) const override;
  bool has_potential() const override { return static_cast<bool>(potential_); }
  double Potential(const Profile& x) const override;
  bool has_objective() const override { return static_cast<bool>(objective_); }
  double Objective(int i, const Profile& x) const override;
  GameConstants constants() const override { return constants_; }

 private:
  MapFn map_;
  JacobianFn jacobian_;
  ScalarFn potential_;
  ObjectiveFn objective_;
  GameConstants constants_;
};

// Sample-average replacement for a missing expected map. The draws are fixed
// by (seed, draws), so the resulting map is a deterministic function of x.
struct SampleAverageOptions {
  int draws = 1000;
  std::uint64_t seed = 0;
};

struct MapEvaluation {
  Vector value;
  bool exact = true;
  int draws_used = 0;
};

// F(x): exact when the game provides it, otherwise the sample average over
// options.draws draws (the exact map wins even when options are given).
MapEvaluation ExpectedMapEval(const GameModel& game, const Profile& x,
                              const SampleAverageOptions& options = {});

// A callable x -> F(x) for deterministic consumers. Throws ConfigError when
// the game has no expected map and no fallback is supplied.
using DeterministicMap = std::function<Vector(const Profile&)>;
DeterministicMap MakeDeterministicMap(
    const GameModel& game,
    const std::optional<SampleAverageOptions>& fallback = std::nullopt);

// Mean of `draws` i.i.d. sampled partial gradients of player i.
Vector MonteCarloMeanGrad(const GameModel& game, int i, const Profile& x,
                          int draws, RngStream& rng);

enum class Provenance { kAnalytic, kOracleComputed };

struct ReferenceSolution {
  Profile x_star;
  Provenance provenance = Provenance::kAnalytic;
  double tolerance = 0.0;

  static ReferenceSolution Analytic(Profile x);
  // tolerance must be positive.
  static ReferenceSolution OracleComputed(Profile x, double tolerance);
};

std::string ProvenanceName(Provenance p);

}  // namespace qne

#endif  // QNE_GAME_H_
