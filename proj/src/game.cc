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

#include "qne/game.h"

#include <cmath>

#include "qne/errors.h"

namespace qne {

Draw NoiseLaw::Sample(RngStream& rng) const {
  Draw d(uniform.size());
  for (size_t j = 0; j < uniform.size(); ++j) {
    d[j] = rng.Uniform(uniform[j].first, uniform[j].second);
  }
  return d;
}

void NoiseLaw::SampleInto(RngStream& rng, Draw& d) const {
  d.resize(uniform.size());
  for (size_t j = 0; j < uniform.size(); ++j) {
    d[j] = rng.Uniform(uniform[j].first, uniform[j].second);
  }
}

Draw NoiseLaw::Mean() const {
  Draw d(uniform.size());
  for (size_t j = 0; j < uniform.size(); ++j) {
    d[j] = 0.5 * (uniform[j].first + uniform[j].second);
  }
  return d;
}

GameModel::GameModel(std::string name, std::vector<FeasibleSet> player_sets,
                     NoiseLaw noise)
    : name_(std::move(name)),
      player_sets_(player_sets),
      joint_(FeasibleSet::MakeProduct(std::move(player_sets))),
      noise_(std::move(noise)) {
  if (player_sets_.empty()) {
    throw InvalidArgument("game needs at least one player");
  }
  for (const auto& s : player_sets_) dims_.push_back(s.dim());
}

Profile GameModel::MakeProfile(Vector data) const {
  std::vector<int> offsets = {0};
  for (int d : dims_) offsets.push_back(offsets.back() + d);
  if (data.size() != offsets.back()) {
    throw InvalidArgument("profile length does not match game dimension");
  }
  return Profile(std::move(data), std::move(offsets));
}

Profile GameModel::ProjectProfile(const Profile& x) const {
  return x.WithData(Project(joint_, x.data()));
}

bool GameModel::IsFeasibleProfile(const Profile& x, double tol) const {
  return IsFeasible(joint_, x.data(), tol);
}

Vector GameModel::SampleMap(const Profile& x,
                            std::span<const double> draw) const {
  Vector out(total_dim());
  SampleMapInto(x, draw, out);
  return out;
}

void GameModel::SampleMapInto(const Profile& x, std::span<const double> draw,
                              Vector& out) const {
  out.resize(total_dim());
  for (int i = 0; i < num_players(); ++i) {
    out.segment(x.offset(i), x.block_size(i)) = SamplePartialGrad(i, x, draw);
  }
}

Vector GameModel::ExpectedMap(const Profile&) const {
  throw UnsupportedOperation(name_ + ": no expected map");
}

Matrix GameModel::JacobianOfExpectedMap(const Profile&) const {
  throw UnsupportedOperation(name_ + ": no Jacobian");
}

double GameModel::Potential(const Profile&) const {
  throw UnsupportedOperation(name_ + ": no potential");
}

double GameModel::Objective(int, const Profile&) const {
  throw UnsupportedOperation(name_ + ": no objective");
}

MapGame::MapGame(std::string name, std::vector<FeasibleSet> player_sets,
                 MapFn expected_map, NoiseLaw additive_noise)
    : GameModel(std::move(name), std::move(player_sets),
                std::move(additive_noise)),
      map_(std::move(expected_map)) {
  if (noise().dim() != 0 && noise().dim() != total_dim()) {
    throw InvalidArgument("additive noise must have one coordinate per entry");
  }
}

MapGame& MapGame::set_jacobian(JacobianFn fn) {
  jacobian_ = std::move(fn);
  return *this;
}
MapGame& MapGame::set_potential(ScalarFn fn) {
  potential_ = std::move(fn);
  return *this;
}
MapGame& MapGame::set_objective(ObjectiveFn fn) {
  objective_ = std::move(fn);
  return *this;
}
MapGame& MapGame::set_constants(GameConstants c) {
  constants_ = c;
  return *this;
}

Vector MapGame::SamplePartialGrad(int i, const Profile& x,
                                  std::span<const double> draw) const {
  Vector g = map_(x.data()).segment(x.offset(i), x.block_size(i));
  if (!draw.empty()) {
    for (int j = 0; j < g.size(); ++j) g[j] += draw[x.offset(i) + j];
  }
  return g;
}

Vector MapGame::ExpectedMap(const Profile& x) const { return map_(x.data()); }

Matrix MapGame::JacobianOfExpectedMap(const Profile& x) const {
  if (!jacobian_) return GameModel::JacobianOfExpectedMap(x);
  return jacobian_(x.data());
}

double MapGame::Potential(const Profile& x) const {
  if (!potential_) return GameModel::Potential(x);
  return potential_(x.data());
}

double MapGame::Objective(int i, const Profile& x) const {
  if (!objective_) return GameModel::Objective(i, x);
  return objective_(i, x.data());
}

MapEvaluation ExpectedMapEval(const GameModel& game, const Profile& x,
                              const SampleAverageOptions& options) {
  if (game.has_expected_map()) return {game.ExpectedMap(x), true, 0};
  if (options.draws < 1) throw InvalidArgument("draws must be >= 1");
  RngStream rng(options.seed, {0, 0, 0xA11});
  Vector sum = Vector::Zero(game.total_dim());
  for (int d = 0; d < options.draws; ++d) {
    Draw xi = game.noise().Sample(rng);
    sum += game.SampleMap(x, xi);
  }
  return {sum / options.draws, false, options.draws};
}

DeterministicMap MakeDeterministicMap(
    const GameModel& game, const std::optional<SampleAverageOptions>& fallback) {
  if (game.has_expected_map()) {
    return [&game](const Profile& x) { return game.ExpectedMap(x); };
  }
  if (!fallback) {
    throw ConfigError(game.name() +
                      ": no expected map and no sample-average fallback");
  }
  SampleAverageOptions opt = *fallback;
  return [&game, opt](const Profile& x) {
    return ExpectedMapEval(game, x, opt).value;
  };
}

Vector MonteCarloMeanGrad(const GameModel& game, int i, const Profile& x,
                          int draws, RngStream& rng) {
  if (draws < 1) throw InvalidArgument("draws must be >= 1");
  Vector sum = Vector::Zero(game.dims()[i]);
  for (int d = 0; d < draws; ++d) {
    Draw xi = game.noise().Sample(rng);
    sum += game.SamplePartialGrad(i, x, xi);
  }
  return sum / draws;
}

ReferenceSolution ReferenceSolution::Analytic(Profile x) {
  return {std::move(x), Provenance::kAnalytic, 0.0};
}

ReferenceSolution ReferenceSolution::OracleComputed(Profile x,
                                                    double tolerance) {
  if (!(tolerance > 0.0)) {
    throw InvalidArgument("oracle tolerance must be positive");
  }
  return {std::move(x), Provenance::kOracleComputed, tolerance};
}

std::string ProvenanceName(Provenance p) {
  return p == Provenance::kAnalytic ? "analytic" : "oracle_computed";
}

}  // namespace qne
