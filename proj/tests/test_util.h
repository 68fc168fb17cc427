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

#ifndef QNE_TESTS_TEST_UTIL_H_
#define QNE_TESTS_TEST_UTIL_H_

#include <memory>
#include <vector>

#include "qne/game.h"
#include "qne/projection.h"

namespace qne::testing {

// One player, f(x) = x^2/2 on [lo, hi], optional additive noise U[-s, s].
inline std::shared_ptr<MapGame> Quadratic1D(double lo, double hi,
                                            double noise = 0.0) {
  NoiseLaw law;
  if (noise > 0.0) law.uniform = {{-noise, noise}};
  auto g = std::make_shared<MapGame>(
      "quadratic", std::vector<FeasibleSet>{FeasibleSet::MakeInterval(lo, hi)},
      [](const Vector& x) { return Vector(x); }, law);
  g->set_jacobian([](const Vector&) { return Matrix::Identity(1, 1); });
  g->set_potential([](const Vector& x) { return 0.5 * x.squaredNorm(); });
  g->set_objective([](int, const Vector& x) { return 0.5 * x.squaredNorm(); });
  return g;
}

// n scalar players on [lo, hi] with F(x) = A (x - x_star).
inline std::shared_ptr<MapGame> AffineGame(const Matrix& A, const Vector& x_star,
                                           double lo, double hi,
                                           double noise = 0.0) {
  const int n = static_cast<int>(A.rows());
  NoiseLaw law;
  if (noise > 0.0) law.uniform.assign(n, {-noise, noise});
  auto g = std::make_shared<MapGame>(
      "affine", std::vector<FeasibleSet>(n, FeasibleSet::MakeInterval(lo, hi)),
      [A, x_star](const Vector& x) { return Vector(A * (x - x_star)); }, law);
  g->set_jacobian([A](const Vector&) { return A; });
  return g;
}

// A game with no expected map; sampled partial gradient x_i + xi_i.
class SamplerOnlyGame : public GameModel {
 public:
  explicit SamplerOnlyGame(int n)
      : GameModel("sampler_only",
                  std::vector<FeasibleSet>(n, FeasibleSet::MakeInterval(-5, 5)),
                  NoiseLaw{std::vector<std::pair<double, double>>(n, {-1, 1})}) {}
  Vector SamplePartialGrad(int i, const Profile& x,
                           std::span<const double> draw) const override {
    return Vector::Constant(1, x.data()[i] + draw[i]);
  }
};

}  // namespace qne::testing

#endif  // QNE_TESTS_TEST_UTIL_H_
