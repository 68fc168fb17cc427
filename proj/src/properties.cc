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

#include "qne/properties.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include "json.hpp"

#include "qne/errors.h"
#include "qne/projection.h"

namespace qne {
namespace {

using json = nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

Profile SamplePoint(const GameModel& game, RngStream& rng) {
  return game.MakeProfile(SampleFeasible(game.joint_feasible(), rng));
}

double QgRatio(const GameModel& game, const Profile& x, const Profile& xs) {
  Vector d = x.data() - xs.data();
  return d.dot(game.ExpectedMap(x)) / d.squaredNorm();
}

double WsRatio(const Vector& F_star, const Vector& x, const Vector& xs) {
  Vector d = x - xs;
  return d.dot(F_star) / d.norm();
}

double MonotoneRatio(const GameModel& game, const Profile& x, const Profile& y) {
  Vector d = x.data() - y.data();
  return (game.ExpectedMap(x) - game.ExpectedMap(y)).dot(d) / d.squaredNorm();
}

// Violation test for monotonicity with a roundoff allowance.
bool MonotoneViolated(const GameModel& game, const Profile& x,
                      const Profile& y) {
  Vector d = x.data() - y.data();
  Vector dF = game.ExpectedMap(x) - game.ExpectedMap(y);
  return dF.dot(d) < -1e-10 * dF.norm() * d.norm();
}

struct PotentialGap {
  double deviation = 0.0;
  double scale = 1.0;
};

PotentialGap PotentialDeviation(const GameModel& game, int i, const Profile& x,
                                const Profile& y) {
  double df = game.Objective(i, x) - game.Objective(i, y);
  double dp = game.Potential(x) - game.Potential(y);
  return {std::abs(df - dp),
          std::max({1.0, std::abs(game.Objective(i, x)),
                    std::abs(game.Potential(x))})};
}

}  // namespace

std::string PropertyName(Property p) {
  switch (p) {
    case Property::kAA: return "AA";
    case Property::kQG: return "QG";
    case Property::kSP: return "SP";
    case Property::kWS: return "WS";
    case Property::kPotential: return "Potential";
    case Property::kMonotone: return "Monotone";
    case Property::kStrictCopositive: return "StrictCopositive";
  }
  return "?";
}

std::string VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kCertified: return "Certified";
    case Verdict::kRefuted: return "Refuted";
    case Verdict::kInconclusive: return "Inconclusive";
  }
  return "?";
}

std::optional<Property> ParseProperty(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(), ::tolower);
  if (s == "aa") return Property::kAA;
  if (s == "qg") return Property::kQG;
  if (s == "sp") return Property::kSP;
  if (s == "ws") return Property::kWS;
  if (s == "potential") return Property::kPotential;
  if (s == "monotone") return Property::kMonotone;
  if (s == "copositive" || s == "strict_copositive") {
    return Property::kStrictCopositive;
  }
  return std::nullopt;
}

std::string ReportToJson(const PropertyReport& r) {
  json j;
  j["property"] = PropertyName(r.property);
  j["verdict"] = VerdictName(r.verdict);
  j["samples_used"] = r.samples_used;
  j["constant_estimate"] = r.constant_estimate ? json(*r.constant_estimate)
                                               : json(nullptr);
  json w = json::array();
  for (const Vector& v : r.witness) {
    w.push_back(std::vector<double>(v.data(), v.data() + v.size()));
  }
  j["witness"] = r.witness.empty() ? json(nullptr) : w;
  if (!r.note.empty()) j["note"] = r.note;
  return j.dump();
}

PropertyReport CheckQG(const GameModel& game, const Profile& x_star,
                       int samples, RngStream& rng,
                       const CheckOptions& options) {
  PropertyReport r;
  r.property = Property::kQG;
  double best = kInf;
  for (int s = 0; s < samples; ++s) {
    Profile x = SamplePoint(game, rng);
    if ((x.data() - x_star.data()).norm() < options.exclusion) continue;
    ++r.samples_used;
    double ratio = QgRatio(game, x, x_star);
    if (ratio < best) best = ratio;
    if (ratio <= 0.0) {
      r.verdict = Verdict::kRefuted;
      r.witness = {x.data()};
      r.constant_estimate = ratio;
      return r;
    }
  }
  if (r.samples_used == 0) return r;
  r.constant_estimate = best;
  r.verdict = best >= options.min_constant ? Verdict::kCertified
                                           : Verdict::kInconclusive;
  return r;
}

PropertyReport CheckAA(const GameModel& game, const Profile& x_star,
                       int samples, RngStream& rng,
                       const CheckOptions& options) {
  PropertyReport r = CheckQG(game, x_star, samples, rng, options);
  r.property = Property::kAA;
  r.note = "derived from the QG check";
  return r;
}

PropertyReport CheckSP(const GameModel& game, int samples, RngStream& rng,
                       const CheckOptions& options) {
  PropertyReport r;
  r.property = Property::kSP;
  double best = kInf;
  long long qualifying = 0;
  const bool box = IsPlainBox(game.joint_feasible());
  const Vector lo = game.joint_feasible().lower();
  const Vector hi = game.joint_feasible().upper();
  // Returns true once a replayable violation is recorded.
  auto consider = [&](const Profile& x, const Profile& y, bool on_boundary) {
    Vector d = x.data() - y.data();
    if (d.norm() < options.exclusion) return false;
    ++r.samples_used;
    Vector Fy = game.ExpectedMap(y);
    double premise = d.dot(Fy);
    if (premise < 0.0 &&
        !(on_boundary && -premise <= 1e-12 * d.norm() * Fy.norm())) {
      return false;
    }
    ++qualifying;
    double ratio = d.dot(game.ExpectedMap(x)) / d.squaredNorm();
    best = std::min(best, ratio);
    if (ratio <= 0.0 && premise >= 0.0) {
      r.verdict = Verdict::kRefuted;
      r.witness = {x.data(), y.data()};
      r.constant_estimate = ratio;
      return true;
    }
    return false;
  };
  for (int s = 0; s < samples; ++s) {
    Profile x = SamplePoint(game, rng);
    Profile y = SamplePoint(game, rng);
    if (consider(x, y, false)) return r;
    if (!box) continue;
    // Pair on the premise boundary: d orthogonal to F(y), shrunk into X.
    Vector Fy = game.ExpectedMap(y);
    Vector d = x.data() - y.data();
    if (Fy.squaredNorm() > 0.0) d -= (d.dot(Fy) / Fy.squaredNorm()) * Fy;
    double t = 1.0;
    for (int j = 0; j < d.size(); ++j) {
      if (d[j] > 0.0) t = std::min(t, (hi[j] - y.data()[j]) / d[j]);
      if (d[j] < 0.0) t = std::min(t, (lo[j] - y.data()[j]) / d[j]);
    }
    if (t <= 0.0) continue;
    if (consider(y.WithData(y.data() + t * d), y, true)) return r;
  }
  if (qualifying == 0) {
    r.note = "no sampled pair met the premise";
    return r;
  }
  r.constant_estimate = best;
  r.verdict = best >= options.min_constant ? Verdict::kCertified
                                           : Verdict::kInconclusive;
  return r;
}

PropertyReport CheckWS(const GameModel& game, const Profile& x_star,
                       int samples, RngStream& rng,
                       const CheckOptions& options) {
  PropertyReport r;
  r.property = Property::kWS;
  Vector F_star = game.ExpectedMap(x_star);
  double best = kInf;
  Vector worst;
  for (int s = 0; s < samples; ++s) {
    Profile x = SamplePoint(game, rng);
    if ((x.data() - x_star.data()).norm() < options.exclusion) continue;
    ++r.samples_used;
    double ratio = WsRatio(F_star, x.data(), x_star.data());
    if (ratio < best) best = ratio, worst = x.data();
  }
  if (r.samples_used == 0) return r;
  r.constant_estimate = best;
  if (best <= 0.0) {
    r.verdict = Verdict::kRefuted;
    r.witness = {worst};
  } else {
    r.verdict = best >= options.min_constant ? Verdict::kCertified
                                             : Verdict::kInconclusive;
  }
  return r;
}

PropertyReport CheckPotential(const GameModel& game, int samples,
                              RngStream& rng, double rel_tol) {
  if (!game.has_potential() || !game.has_objective()) {
    throw UnsupportedOperation(game.name() +
                               ": potential check needs P and f_i");
  }
  PropertyReport r;
  r.property = Property::kPotential;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    int i = static_cast<int>(rng.UniformInt(game.num_players()));
    Profile x = SamplePoint(game, rng);
    Profile y = x;
    y.block(i) = SampleFeasible(game.feasible(i), rng);
    ++r.samples_used;
    PotentialGap g = PotentialDeviation(game, i, x, y);
    double rel = g.deviation / g.scale;
    worst = std::max(worst, rel);
    if (rel > rel_tol) {
      r.verdict = Verdict::kRefuted;
      r.witness = {x.data(), y.data(), Vector::Constant(1, i)};
      r.constant_estimate = rel;
      return r;
    }
  }
  r.constant_estimate = worst;
  r.verdict = Verdict::kCertified;
  return r;
}

PropertyReport MonotoneProbe(const GameModel& game, int samples,
                             RngStream& rng) {
  PropertyReport r;
  r.property = Property::kMonotone;
  const FeasibleSet& X = game.joint_feasible();
  const double span = (X.upper() - X.lower()).cwiseMin(kUnboundedSpan).norm();
  double best = kInf;
  auto consider = [&](const Profile& x, const Profile& y) {
    if ((x.data() - y.data()).norm() < 1e-12) return false;
    ++r.samples_used;
    best = std::min(best, MonotoneRatio(game, x, y));
    if (MonotoneViolated(game, x, y)) {
      r.verdict = Verdict::kRefuted;
      r.witness = {x.data(), y.data()};
      r.constant_estimate = MonotoneRatio(game, x, y);
      return true;
    }
    return false;
  };
  for (int s = 0; s < samples; ++s) {
    Profile x = SamplePoint(game, rng);
    Profile y = SamplePoint(game, rng);
    if (consider(x, y)) return r;
    if (game.has_jacobian()) {
      // Short step along the most negative direction of the symmetric part.
      Matrix J = game.JacobianOfExpectedMap(x);
      Matrix S = 0.5 * (J + J.transpose());
      Eigen::SelfAdjointEigenSolver<Matrix> eig(S);
      Vector u = eig.eigenvectors().col(0);
      for (double h : {1e-3 * span, -1e-3 * span}) {
        Profile z = x.WithData(Project(X, x.data() + h * u));
        if (consider(z, x)) return r;
      }
    }
  }
  if (r.samples_used == 0) return r;
  r.constant_estimate = best;
  r.verdict = Verdict::kCertified;
  return r;
}

PropertyReport CheckStrictCopositivity(const Matrix& M, Cone cone, int samples,
                                       RngStream& rng) {
  if (M.rows() != M.cols() || M.rows() == 0) {
    throw InvalidArgument("copositivity needs a nonempty square matrix");
  }
  PropertyReport r;
  r.property = Property::kStrictCopositive;
  const Matrix S = 0.5 * (M + M.transpose());
  const int n = static_cast<int>(S.rows());
  if (cone == Cone::kFullSpace) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(S);
    double lmin = eig.eigenvalues()[0];
    r.samples_used = 1;
    r.constant_estimate = lmin;
    if (lmin > 0.0) {
      r.verdict = Verdict::kCertified;
    } else {
      r.verdict = Verdict::kRefuted;
      r.witness = {eig.eigenvectors().col(0)};
    }
    return r;
  }
  double best = kInf;
  Vector worst;
  auto consider = [&](const Vector& v) {
    ++r.samples_used;
    double q = v.dot(S * v) / v.squaredNorm();
    if (q < best) best = q, worst = v;
  };
  for (int j = 0; j < n; ++j) consider(Vector::Unit(n, j));
  for (int s = 0; s < samples; ++s) {
    Vector v(n);
    for (int j = 0; j < n; ++j) v[j] = std::abs(rng.Normal());
    if (v.norm() > 0.0) consider(v / v.norm());
  }
  r.constant_estimate = best;
  if (best <= 0.0) {
    r.verdict = Verdict::kRefuted;
    r.witness = {worst};
  } else {
    r.verdict = Verdict::kCertified;
  }
  return r;
}

bool ReplayWitness(const GameModel& game, const PropertyReport& report,
                   const std::optional<Profile>& x_star) {
  if (report.verdict != Verdict::kRefuted) return false;
  const auto& w = report.witness;
  switch (report.property) {
    case Property::kAA:
    case Property::kQG: {
      if (!x_star || w.size() != 1) return false;
      return QgRatio(game, game.MakeProfile(w[0]), *x_star) <= 0.0;
    }
    case Property::kWS: {
      if (!x_star || w.size() != 1) return false;
      return WsRatio(game.ExpectedMap(*x_star), w[0], x_star->data()) <= 0.0;
    }
    case Property::kSP: {
      if (w.size() != 2) return false;
      Vector d = w[0] - w[1];
      return d.dot(game.ExpectedMap(game.MakeProfile(w[1]))) >= 0.0 &&
             d.dot(game.ExpectedMap(game.MakeProfile(w[0]))) <= 0.0;
    }
    case Property::kMonotone: {
      if (w.size() != 2) return false;
      return MonotoneViolated(game, game.MakeProfile(w[0]),
                              game.MakeProfile(w[1]));
    }
    case Property::kPotential: {
      if (w.size() != 3) return false;
      int i = static_cast<int>(w[2][0]);
      PotentialGap g = PotentialDeviation(game, i, game.MakeProfile(w[0]),
                                          game.MakeProfile(w[1]));
      return g.deviation / g.scale > 1e-8;
    }
    case Property::kStrictCopositive:
      return false;
  }
  return false;
}

bool ReplayCopositivityWitness(const Matrix& M, const PropertyReport& report) {
  if (report.verdict != Verdict::kRefuted || report.witness.size() != 1) {
    return false;
  }
  const Vector& v = report.witness[0];
  if (v.norm() == 0.0) return false;
  return v.dot(M * v) <= 1e-12 * M.norm() * v.squaredNorm();
}

}  // namespace qne
