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

#ifndef QNE_HARNESS_H_
#define QNE_HARNESS_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qne/game.h"
#include "qne/gap.h"
#include "qne/schemes.h"

namespace qne {

enum class SchemeKind { kSsgr, kSagr, kSgr, kTwoStage, kZamgr };

std::string SchemeKindName(SchemeKind s);

// Second stage of the two-stage scheme. Either give (stage2_gamma0, q) or
// let them come from the game's WS/Lipschitz/moment constants and delta.
// Likewise either switch_iter or Q.
struct TwoStageSpec {
  double gamma0 = 1.0;
  std::optional<double> stage2_gamma0;
  std::optional<double> q;
  std::optional<double> delta;
  std::optional<int> switch_iter;
  std::optional<double> Q;
};

struct InitSpec {
  enum class Kind { kUniform, kReferenceOffset, kPoint };
  Kind kind = Kind::kUniform;
  double low = 0.0;   // offset range for kReferenceOffset
  double high = 0.0;
  std::vector<double> point;
};

struct ExperimentConfig {
  std::string game = "network";
  std::string overrides_json = "{}";  // preset parameter overrides
  SchemeKind scheme = SchemeKind::kSsgr;
  std::optional<StepsizePolicy> policy;  // SSGR, SAGR, SGR
  std::optional<TwoStageSpec> two_stage;
  GapConfig gap;
  std::vector<double> probs;
  InitSpec init;
  int paths = 50;
  int iters = 1000;  // K for ZAMGR
  std::uint64_t seed = 0;
  int record_every = 1;
  std::string output;
  double reference_tol = 1e-8;
  int workers = 0;  // 0: QNE_WORKERS or the hardware count
};

// Parses the JSON config document; unknown keys throw ConfigError.
ExperimentConfig ParseConfig(const std::string& json_text);
ExperimentConfig LoadConfig(const std::string& path);
std::string ConfigToJson(const ExperimentConfig& cfg);
// Throws ConfigError naming the first problem.
void ValidateConfig(const ExperimentConfig& cfg);

// The game a config refers to, with overrides applied.
std::shared_ptr<GameModel> BuildGame(const std::string& preset,
                                     const std::string& overrides_json = "{}");
ReferenceSolution BuildReference(const GameModel& game, double tol);

struct RunRecord {
  std::vector<int> iterations;
  // paths x checkpoints
  std::vector<std::vector<double>> rel_err;
  std::vector<std::vector<double>> sq_err;
  std::vector<std::vector<double>> residual_sq;  // ZAMGR with a Jacobian
  std::vector<double> wall_seconds;
  // ZAMGR output point x_R per path.
  std::vector<double> final_rel_err;
  std::vector<int> output_index;
  Provenance provenance = Provenance::kAnalytic;
  double reference_tolerance = 0.0;
  std::vector<double> reference_x;

  int num_paths() const { return static_cast<int>(rel_err.size()); }
  bool has_residual() const { return !residual_sq.empty(); }
};

struct Aggregate {
  std::vector<double> mean_rel_err;
  std::vector<double> std_rel_err;
  std::vector<double> mean_sq_err;
  std::vector<double> mean_residual_sq;
};

// Mean and sample standard deviation (n - 1; 0 for a single path) per
// checkpoint, folded in path order.
Aggregate AggregateRecord(const RunRecord& record);
double MeanOf(const std::vector<double>& v);
double SampleStd(const std::vector<double>& v);

int ResolveWorkers(int requested);

RunRecord RunExperiment(const ExperimentConfig& cfg);

// CSV text. Doubles use shortest round-trip formatting.
std::string AggregateCsv(const RunRecord& record);
std::string PathsCsv(const RunRecord& record);
std::string FormatDouble(double v);
// Writes the aggregate CSV to path and the per-path sidecar next to it
// (foo.csv -> foo_paths.csv), plus foo_meta.json with the reference point.
void WriteRecord(const RunRecord& record, const std::string& path);
std::string SidecarPath(const std::string& path, const std::string& suffix);

enum class FitMode { kLogLog, kSemiLog };
struct RateFitResult {
  double slope = 0.0;
  double r2 = 0.0;
  int points = 0;
};
// Least squares of log(value) against log(k) or k over k in [k_lo, k_hi].
// Needs at least 10 points with positive values.
RateFitResult RateFit(const std::vector<int>& iterations,
                      const std::vector<double>& values, int k_lo, int k_hi,
                      FitMode mode);
// Fits the mean squared error of a record.
RateFitResult RateFit(const RunRecord& record, int k_lo, int k_hi,
                      FitMode mode);

inline constexpr long long kNotReached = -1;
// First recorded iteration at which each mean relative error is <= threshold,
// kNotReached otherwise.
std::pair<long long, long long> CompareRuns(const RunRecord& a,
                                            const RunRecord& b,
                                            double threshold);

struct NamedConfig {
  std::string name;
  ExperimentConfig config;
};
// Preset bundles "fig1", "fig2a", "fig2b". Throws ConfigError otherwise.
std::vector<NamedConfig> ReproduceBundle(const std::string& figure,
                                         std::uint64_t seed);

}  // namespace qne

#endif  // QNE_HARNESS_H_
