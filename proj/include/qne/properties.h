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

#ifndef QNE_PROPERTIES_H_
#define QNE_PROPERTIES_H_

#include <optional>
#include <string>
#include <vector>

#include "qne/game.h"
#include "qne/rng.h"

namespace qne {

enum class Property { kAA, kQG, kSP, kWS, kPotential, kMonotone,
                      kStrictCopositive };
enum class Verdict { kCertified, kRefuted, kInconclusive };

std::string PropertyName(Property p);
std::string VerdictName(Verdict v);
// Accepts the lower-case names used on the command line ("qg", "ws", ...).
std::optional<Property> ParseProperty(const std::string& name);

// A sampling verdict. Certified means no violation was found at the sampled
// resolution. For a Refuted report the witness holds the violating point(s):
// one point for QG/WS/AA, a pair (x, y) for SP/Monotone, the triple
// (x, y_i padded into x, player index as a 1-vector) for Potential, and a
// direction for StrictCopositive.
struct PropertyReport {
  Property property = Property::kQG;
  Verdict verdict = Verdict::kInconclusive;
  std::vector<Vector> witness;
  std::optional<double> constant_estimate;
  long long samples_used = 0;
  std::string note;
};

std::string ReportToJson(const PropertyReport& report);

struct CheckOptions {
  // Certification needs the empirical constant to be at least this.
  double min_constant = 1e-9;
  // Sampled x with |x - x*| below this are skipped.
  double exclusion = 1e-6;
};

PropertyReport CheckQG(const GameModel& game, const Profile& x_star,
                       int samples, RngStream& rng,
                       const CheckOptions& options = {});
// Reported as a consequence of QG.
PropertyReport CheckAA(const GameModel& game, const Profile& x_star,
                       int samples, RngStream& rng,
                       const CheckOptions& options = {});
PropertyReport CheckSP(const GameModel& game, int samples, RngStream& rng,
                       const CheckOptions& options = {});
PropertyReport CheckWS(const GameModel& game, const Profile& x_star,
                       int samples, RngStream& rng,
                       const CheckOptions& options = {});
// Throws UnsupportedOperation without potential and objective evaluators.
PropertyReport CheckPotential(const GameModel& game, int samples,
                              RngStream& rng, double rel_tol = 1e-8);
PropertyReport MonotoneProbe(const GameModel& game, int samples,
                             RngStream& rng);

enum class Cone { kFullSpace, kNonnegOrthant };

PropertyReport CheckStrictCopositivity(const Matrix& M, Cone cone, int samples,
                                       RngStream& rng);

// Re-evaluates the defining inequality at a Refuted report's witness and
// returns true when the violation is reproduced. x_star is needed for QG, AA
// and WS.
bool ReplayWitness(const GameModel& game, const PropertyReport& report,
                   const std::optional<Profile>& x_star = std::nullopt);
bool ReplayCopositivityWitness(const Matrix& M, const PropertyReport& report);

}  // namespace qne

#endif  // QNE_PROPERTIES_H_
