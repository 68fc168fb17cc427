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

#ifndef QNE_GAP_H_
#define QNE_GAP_H_

#include <functional>
#include <optional>
#include <vector>

#include "qne/game.h"
#include "qne/rng.h"
#include "qne/schemes.h"

namespace qne {

struct GapConfig {
  double c = 1.0;
  double a = 1.0;
  double b = 1.0;
  double e = 4.0;
  double delta = 0.1;
  double alpha0 = 1.0;
  double Gamma = 1.0;
  double lambda = 0.5;
  double gamma = 0.02;
  std::optional<double> L1;

  // Desk-scale controls. N_k is multiplied by batch_scale before rounding up;
  // a positive cap bounds N_k or t_k from above.
  double batch_scale = 1.0;
  int batch_cap = 0;
  int inner_cap = 0;
  // Reuse one inner noise sequence for the solves at x + v and x - v.
  bool common_inner_noise = true;

  // Throws InvalidArgument naming the violated condition.
  void Validate(int num_players) const;
};

// Pi_X[x - F(x)/c].
Profile YcExact(const GameModel& game, double c, const Profile& x);

// F(x)^T (x - y_c(x)) - (c/2) |x - y_c(x)|^2.
double ThetaC(const GameModel& game, double c, const Profile& x);

// Single-draw gap estimate at a supplied y.
double ThetaCTilde(const GameModel& game, double c, const Profile& x,
                   const Profile& y, std::span<const double> xi);

// t_k projected SA steps on y -> F~(x_hat)^T (y - x_hat) + (c/2)|y - x_hat|^2
// with alpha_t = alpha0 / (t + Gamma).
Profile SaInner(const GameModel& game, double c, const Profile& x_hat,
                int t_k, double alpha0, double Gamma, const Profile& y0,
                RngStream& rng);

// max{(cF^2 + vG^2) alpha0^2 / (2 c alpha0 - 1), Gamma D2} where D2 bounds
// |y0 - y|^2 over X.
double InnerErrorConstant(double c, double alpha0, double Gamma, double cF_sq,
                          double vG_sq, double D2);

struct Schedule {
  long long N_k = 1;
  double eta_k = 1.0;
  long long t_k = 1;
};

// The raw formulas N_k = ceil(n^a (k+1)^(1+delta)),
// eta_k = n^-b (k+1)^-(1/2+delta), t_k = ceil(n^e (k+1)^(2+3 delta)).
Schedule Schedules(int k, int n, const GapConfig& cfg);
// Schedules with batch_scale, batch_cap and inner_cap applied.
Schedule EffectiveSchedules(int k, int n, const GapConfig& cfg);

// Uniform draw on the sphere of radius eta in R^n.
Vector SampleSphere(double eta, int n, RngStream& rng);

// n (theta~(x+v) - theta~(x-v)) v_i / (2 eta |v|) for block i, using one draw
// xi for both gap evaluations. eta is taken as |v|.
Vector ZoPartialEstimate(const GameModel& game, const GapConfig& cfg,
                         const Profile& x, int i, const Vector& v,
                         std::span<const double> xi, const Profile& y_plus,
                         const Profile& y_minus);
// All blocks at once.
Vector ZoFullEstimate(const GameModel& game, const GapConfig& cfg,
                      const Profile& x, const Vector& v,
                      std::span<const double> xi, const Profile& y_plus,
                      const Profile& y_minus);

// beta (x - Pi_X[x - grad/beta]).
Vector ResidualMap(const GameModel& game, double beta, const Profile& x,
                   const Vector& grad_theta);

// F(x) + JF(x)^T (x - y_c(x)) - c (x - y_c(x)). Needs the Jacobian.
Vector GradThetaExact(const GameModel& game, double c, const Profile& x);

enum class ZamgrGradient {
  kZeroOrder,   // sphere samples with inner SA solves
  kExactInner,  // sphere samples with exact y_c
  kOracle,      // exact gradient of theta_c for the selected block
};

struct ZamgrOptions {
  ZamgrGradient gradient = ZamgrGradient::kZeroOrder;
  int record_every = 1;
  std::function<void(const Profile&, int k, int selected)> observer;
};

struct ZamgrResult {
  Profile x_R;
  int R = 0;
  Trajectory trajectory;
  long long samples_used = 0;
  long long inner_steps = 0;
};

ZamgrResult ZamgrRun(const GameModel& game, const GapConfig& cfg,
                     const Profile& x0, int K, const RngStream& rng,
                     const std::optional<ReferenceSolution>& reference =
                         std::nullopt,
                     const ZamgrOptions& options = {});

}  // namespace qne

#endif  // QNE_GAP_H_
