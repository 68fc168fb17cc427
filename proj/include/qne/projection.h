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

#ifndef QNE_PROJECTION_H_
#define QNE_PROJECTION_H_

#include <variant>
#include <vector>

#include "qne/profile.h"
#include "qne/rng.h"

namespace qne {

// Hyperplane residual reached by Project on a BoxHyperplane.
inline constexpr double kProjectionTol = 1e-12;
// Slack used when checking the variational inequality of a projection.
inline constexpr double kVariationalSlack = 1e-9;

class FeasibleSet;

struct Box {
  Vector lb;
  Vector ub;
};

// {y : lb <= y <= ub, a'y = b0}.
struct BoxHyperplane {
  Vector lb;
  Vector ub;
  Vector a;
  double b0 = 0.0;
};

struct Product {
  std::vector<FeasibleSet> factors;
};

// Closed convex feasible region. Bounds may be infinite.
class FeasibleSet {
 public:
  using Kind = std::variant<Box, BoxHyperplane, Product>;

  static FeasibleSet MakeBox(Vector lb, Vector ub);
  static FeasibleSet MakeInterval(double lb, double ub);
  // Throws InfeasibleSet when the hyperplane does not meet the box.
  static FeasibleSet MakeBoxHyperplane(Vector lb, Vector ub, Vector a,
                                       double b0);
  static FeasibleSet MakeProduct(std::vector<FeasibleSet> factors);

  int dim() const { return dim_; }
  const Kind& kind() const { return kind_; }

  // Componentwise bounds of the set (for a product, the stacked bounds).
  Vector lower() const;
  Vector upper() const;

 private:
  FeasibleSet(Kind kind, int dim) : kind_(std::move(kind)), dim_(dim) {}

  Kind kind_;
  int dim_ = 0;
};

// Euclidean projection argmin_{y in set} |y - x|. Throws InvalidArgument on a
// dimension mismatch.
Vector Project(const FeasibleSet& set, const Vector& x);

// True iff every bound is violated by at most tol and, for hyperplane sets,
// |a'x - b0| <= tol * (1 + |b0|).
bool IsFeasible(const FeasibleSet& set, const Vector& x, double tol);

// True when the set is a box or a product of boxes, so projection is a clamp
// onto lower() and upper().
bool IsPlainBox(const FeasibleSet& set);

// A random feasible point: uniform in the bounding box (infinite sides are
// truncated to a span of kUnboundedSpan), then projected onto the set.
inline constexpr double kUnboundedSpan = 100.0;
Vector SampleFeasible(const FeasibleSet& set, RngStream& rng);

}  // namespace qne

#endif  // QNE_PROJECTION_H_
