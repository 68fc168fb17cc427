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

#include "qne/projection.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "qne/errors.h"

namespace qne {
namespace {

constexpr int kBisectionCap = 200;
constexpr int kBracketCap = 1100;

void CheckBounds(const Vector& lb, const Vector& ub, const char* who) {
  if (lb.size() != ub.size()) {
    throw InvalidArgument(std::string(who) + ": lb/ub size mismatch");
  }
  for (int j = 0; j < lb.size(); ++j) {
    if (std::isnan(lb[j]) || std::isnan(ub[j]) || lb[j] > ub[j]) {
      throw InvalidArgument(std::string(who) + ": need lb <= ub at index " +
                            std::to_string(j));
    }
  }
}

Vector Clamp(const Vector& x, const Vector& lb, const Vector& ub) {
  return x.cwiseMax(lb).cwiseMin(ub);
}

// Range of a'y over the box; infinite when the box is unbounded along a.
std::pair<double, double> LinearRange(const Vector& lb, const Vector& ub,
                                      const Vector& a) {
  double lo = 0.0, hi = 0.0;
  for (int j = 0; j < a.size(); ++j) {
    if (a[j] > 0) {
      lo += a[j] * lb[j];
      hi += a[j] * ub[j];
    } else if (a[j] < 0) {
      lo += a[j] * ub[j];
      hi += a[j] * lb[j];
    }
  }
  return {lo, hi};
}

Vector ProjectBoxHyperplane(const BoxHyperplane& s, const Vector& x) {
  const double aa = s.a.squaredNorm();
  if (aa == 0.0) return Clamp(x, s.lb, s.ub);

  // g is nonincreasing and piecewise linear in lambda.
  auto g = [&](double lambda) {
    return s.a.dot(Clamp(x - lambda * s.a, s.lb, s.ub)) - s.b0;
  };
  double lo = -1.0, hi = 1.0;
  for (int it = 0; g(lo) < 0.0; ++it) {
    if (it > kBracketCap) throw InfeasibleSet("BoxHyperplane: no bracket");
    lo *= 2.0;
  }
  for (int it = 0; g(hi) > 0.0; ++it) {
    if (it > kBracketCap) throw InfeasibleSet("BoxHyperplane: no bracket");
    hi *= 2.0;
  }
  for (int it = 0; it < kBisectionCap; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (g(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  Vector y = Clamp(x - 0.5 * (lo + hi) * s.a, s.lb, s.ub);

  // Remove the residual along the coordinates that are strictly inside the
  // box; at the solution these carry the whole multiplier.
  const double residual = s.a.dot(y) - s.b0;
  double free_norm = 0.0;
  for (int j = 0; j < y.size(); ++j) {
    if (y[j] > s.lb[j] && y[j] < s.ub[j]) free_norm += s.a[j] * s.a[j];
  }
  if (residual != 0.0 && free_norm > 0.0) {
    const double step = residual / free_norm;
    for (int j = 0; j < y.size(); ++j) {
      if (y[j] > s.lb[j] && y[j] < s.ub[j]) {
        y[j] = std::clamp(y[j] - step * s.a[j], s.lb[j], s.ub[j]);
      }
    }
  }
  return y;
}

}  // namespace

FeasibleSet FeasibleSet::MakeBox(Vector lb, Vector ub) {
  CheckBounds(lb, ub, "Box");
  const int n = static_cast<int>(lb.size());
  return FeasibleSet(Box{std::move(lb), std::move(ub)}, n);
}

FeasibleSet FeasibleSet::MakeInterval(double lb, double ub) {
  return MakeBox(Vector::Constant(1, lb), Vector::Constant(1, ub));
}

FeasibleSet FeasibleSet::MakeBoxHyperplane(Vector lb, Vector ub, Vector a,
                                           double b0) {
  CheckBounds(lb, ub, "BoxHyperplane");
  if (a.size() != lb.size()) {
    throw InvalidArgument("BoxHyperplane: normal has wrong dimension");
  }
  const auto [lo, hi] = LinearRange(lb, ub, a);
  if (!(lo <= b0 && b0 <= hi)) {
    throw InfeasibleSet("BoxHyperplane: a'y = " + std::to_string(b0) +
                        " misses the box (range [" + std::to_string(lo) +
                        ", " + std::to_string(hi) + "])");
  }
  const int n = static_cast<int>(lb.size());
  return FeasibleSet(
      BoxHyperplane{std::move(lb), std::move(ub), std::move(a), b0}, n);
}

FeasibleSet FeasibleSet::MakeProduct(std::vector<FeasibleSet> factors) {
  if (factors.empty()) throw InvalidArgument("Product: no factors");
  int n = 0;
  for (const auto& f : factors) n += f.dim();
  return FeasibleSet(Product{std::move(factors)}, n);
}

Vector FeasibleSet::lower() const {
  if (const auto* b = std::get_if<Box>(&kind_)) return b->lb;
  if (const auto* h = std::get_if<BoxHyperplane>(&kind_)) return h->lb;
  Vector out(dim_);
  int at = 0;
  for (const auto& f : std::get<Product>(kind_).factors) {
    out.segment(at, f.dim()) = f.lower();
    at += f.dim();
  }
  return out;
}

Vector FeasibleSet::upper() const {
  if (const auto* b = std::get_if<Box>(&kind_)) return b->ub;
  if (const auto* h = std::get_if<BoxHyperplane>(&kind_)) return h->ub;
  Vector out(dim_);
  int at = 0;
  for (const auto& f : std::get<Product>(kind_).factors) {
    out.segment(at, f.dim()) = f.upper();
    at += f.dim();
  }
  return out;
}

Vector Project(const FeasibleSet& set, const Vector& x) {
  if (x.size() != set.dim()) {
    throw InvalidArgument("Project: dimension " + std::to_string(x.size()) +
                          " does not match set dimension " +
                          std::to_string(set.dim()));
  }
  return std::visit(
      [&](const auto& s) -> Vector {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          return Clamp(x, s.lb, s.ub);
        } else if constexpr (std::is_same_v<T, BoxHyperplane>) {
          return ProjectBoxHyperplane(s, x);
        } else {
          Vector out(x.size());
          int at = 0;
          for (const auto& f : s.factors) {
            out.segment(at, f.dim()) = Project(f, x.segment(at, f.dim()));
            at += f.dim();
          }
          return out;
        }
      },
      set.kind());
}

bool IsFeasible(const FeasibleSet& set, const Vector& x, double tol) {
  if (x.size() != set.dim()) return false;
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Product>) {
          int at = 0;
          for (const auto& f : s.factors) {
            if (!IsFeasible(f, x.segment(at, f.dim()), tol)) return false;
            at += f.dim();
          }
          return true;
        } else {
          for (int j = 0; j < x.size(); ++j) {
            if (!(x[j] >= s.lb[j] - tol && x[j] <= s.ub[j] + tol)) {
              return false;
            }
          }
          if constexpr (std::is_same_v<T, BoxHyperplane>) {
            return std::abs(s.a.dot(x) - s.b0) <= tol * (1.0 + std::abs(s.b0));
          }
          return true;
        }
      },
      set.kind());
}

Vector SampleFeasible(const FeasibleSet& set, RngStream& rng) {
  Vector lb = set.lower();
  Vector ub = set.upper();
  Vector x(set.dim());
  for (int j = 0; j < x.size(); ++j) {
    double lo = lb[j], hi = ub[j];
    if (std::isinf(lo) && std::isinf(hi)) {
      lo = -kUnboundedSpan;
      hi = kUnboundedSpan;
    } else if (std::isinf(lo)) {
      lo = hi - kUnboundedSpan;
    } else if (std::isinf(hi)) {
      hi = lo + kUnboundedSpan;
    }
    x[j] = rng.Uniform(lo, hi);
  }
  return Project(set, x);
}

bool IsPlainBox(const FeasibleSet& set) {
  if (std::holds_alternative<Box>(set.kind())) return true;
  if (const auto* p = std::get_if<Product>(&set.kind())) {
    for (const auto& f : p->factors) {
      if (!IsPlainBox(f)) return false;
    }
    return true;
  }
  return false;
}

}  // namespace qne
