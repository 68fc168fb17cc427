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

#include "qne/schemes.h"

#include <cmath>
#include <numeric>
#include <string>

#include "qne/errors.h"

namespace qne {
namespace {

constexpr std::uint64_t kRoleStep = 1;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

void Require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

}  // namespace

void ValidatePolicy(const StepsizePolicy& policy) {
  std::visit(
      Overloaded{
          [](const Diminishing& d) { Require(d.gamma0 > 0, "gamma0 > 0"); },
          [](const Constant& c) { Require(c.delta > 0, "delta > 0"); },
          [](const Geometric& g) {
            Require(g.gamma0 > 0, "gamma0 > 0");
            Require(g.q > 0 && g.q < 1, "0 < q < 1");
          },
          [](const AsyncHarmonic& a) { Require(a.scale > 0, "scale > 0"); },
          [](const TwoStage& t) {
            Require(t.stage1.gamma0 > 0, "stage1 gamma0 > 0");
            Require(t.stage2.gamma0 > 0, "stage2 gamma0 > 0");
            Require(t.stage2.q > 0 && t.stage2.q < 1, "0 < stage2 q < 1");
            Require(t.switch_iter >= 1, "switch_iter >= 1");
          },
      },
      policy);
}

double PolicyStepsize(const StepsizePolicy& policy, int k) {
  Require(k >= 1, "step index starts at 1");
  return std::visit(
      Overloaded{
          [k](const Diminishing& d) { return d.gamma0 / k; },
          [](const Constant& c) { return c.delta; },
          [k](const Geometric& g) { return g.gamma0 * std::pow(g.q, k - 1); },
          [](const AsyncHarmonic&) -> double {
            throw InvalidArgument("AsyncHarmonic has no synchronous stepsize");
          },
          [k](const TwoStage& t) {
            if (k < t.switch_iter) return t.stage1.gamma0 / k;
            return t.stage2.gamma0 * std::pow(t.stage2.q, k - t.switch_iter);
          },
      },
      policy);
}

double AsyncStepsize(const UpdateCounters& counters, int i) {
  int c = counters.counts.at(i);
  return c > 0 ? 1.0 / c : 0.0;
}

Profile SsgrStep(const GameModel& game, const Profile& x, double gamma,
                 RngStream& rng) {
  Profile next = x;
  for (int i = 0; i < game.num_players(); ++i) {
    Draw xi = game.noise().Sample(rng);
    Vector g = game.SamplePartialGrad(i, x, xi);
    next.block(i) = Project(game.feasible(i), x.block(i) - gamma * g);
  }
  return next;
}

SagrResult SagrStep(const GameModel& game, const Profile& x,
                    const UpdateCounters& counters,
                    const std::vector<double>& probs, RngStream& rng,
                    double scale, std::optional<double> fixed_gamma) {
  const int n = game.num_players();
  Require(static_cast<int>(probs.size()) == n, "one probability per player");
  double total = 0.0;
  for (double p : probs) {
    Require(p >= 0.0 && std::isfinite(p), "probabilities nonnegative");
    total += p;
  }
  Require(std::abs(total - 1.0) <= 1e-9, "probabilities sum to 1");

  double u = rng.Uniform() * total;
  int selected = n - 1;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += probs[i];
    if (u < acc && probs[i] > 0.0) {
      selected = i;
      break;
    }
  }
  while (probs[selected] == 0.0) --selected;

  SagrResult out{x, counters, selected, 0.0};
  out.counters.counts[selected] += 1;
  out.counters.iteration += 1;
  out.gamma = fixed_gamma ? *fixed_gamma
                          : scale * AsyncStepsize(out.counters, selected);
  Draw xi = game.noise().Sample(rng);
  Vector g = game.SamplePartialGrad(selected, x, xi);
  out.x.block(selected) =
      Project(game.feasible(selected), x.block(selected) - out.gamma * g);
  return out;
}

Profile SgrStep(const GameModel& game, const Profile& x, double gamma,
                const DeterministicMap& map) {
  Vector F = map(x);
  Profile next = x;
  for (int i = 0; i < game.num_players(); ++i) {
    next.block(i) = Project(game.feasible(i),
                            x.block(i) - gamma * F.segment(x.offset(i),
                                                           x.block_size(i)));
  }
  return next;
}

Profile SgrStep(const GameModel& game, const Profile& x, double gamma) {
  return SgrStep(game, x, gamma, MakeDeterministicMap(game));
}

double LinearRateRadius(double delta, double beta, double L, int N) {
  return (1.0 - delta) * beta / (N * L);
}

std::pair<double, double> GeometricParams(double e0, double delta, double beta,
                                          double L, double M, int N) {
  Require(N >= 1, "N >= 1");
  Require(delta > 0 && delta < 1, "0 < delta < 1");
  Require(beta > 0, "beta > 0");
  Require(L > 0, "L > 0");
  Require(M > 0, "M > 0");
  double expected = LinearRateRadius(delta, beta, L, N);
  Require(std::abs(e0 - expected) <= 1e-9 * std::max(1.0, expected),
          "e0 = (1 - delta) beta / (N L)");
  Require(delta * delta * beta * beta < M * N, "delta^2 beta^2 < M N");

  const double rn = std::sqrt(static_cast<double>(N));
  const double D = 2.0 * beta - 2.0 * L * rn * e0;
  const double g2 = (beta * e0 - L * N * e0 * e0) / M;
  if (D > 0.0) {
    const double g1 = rn * e0 / D;
    if (g1 < g2) {
      double q = std::sqrt((2.0 * beta * rn - 2.0 * beta) * D + M * rn) /
                 (std::pow(N, 0.25) * D);
      return {g1, q};
    }
  }
  return {g2, std::sqrt(1.0 - delta * delta * beta * beta / (M * N))};
}

double QBound(double gamma0, double alpha, double M_total, double e1) {
  Require(2.0 * alpha * gamma0 - 1.0 > 0.0, "gamma0 > 1/(2 alpha)");
  Require(M_total >= 0.0, "M_total >= 0");
  Require(e1 >= 0.0, "e1 >= 0");
  double first = 2.0 * gamma0 * gamma0 * M_total / (2.0 * alpha * gamma0 - 1.0);
  return std::max(first, e1);
}

int TwoStageSwitchIter(double Q, int N, double e0) {
  Require(Q > 0 && e0 > 0 && N >= 1, "Q, e0 > 0");
  double k = std::ceil(Q / (N * e0 * e0));
  return std::max(1, static_cast<int>(k));
}

std::vector<double> ChungRecursionOracle(double c, double A, double B,
                                         double p, double e0, int iters) {
  Require(c > 0 && A >= 0 && B >= 0 && p > 0, "c, p > 0 and A, B >= 0");
  Require(e0 >= 0, "e0 >= 0");
  Require(iters >= 1, "iters >= 1");
  std::vector<double> e(iters);
  e[0] = e0;
  for (int k = 2; k <= iters; ++k) {
    double kk = k;
    double kp = std::pow(kk, 1.0 + p);
    e[k - 1] = (1.0 - c / kk + A / kp) * e[k - 2] + B / kp;
  }
  return e;
}

Trajectory RunScheme(const GameModel& game, Scheme scheme,
                     const StepsizePolicy& policy, const Profile& x0,
                     int iters, const RngStream& rng,
                     const std::optional<ReferenceSolution>& reference,
                     const RunOptions& options) {
  Require(iters >= 1, "iters >= 1");
  Require(options.record_every >= 1, "record_every >= 1");
  ValidatePolicy(policy);
  if (!game.IsFeasibleProfile(x0, 1e-10)) {
    throw InvalidArgument("x0 is not feasible");
  }
  const bool async = std::holds_alternative<AsyncHarmonic>(policy);
  if (async && scheme != Scheme::kSagr) {
    throw ConfigError("AsyncHarmonic stepsize needs the SAGR scheme");
  }
  DeterministicMap map;
  if (scheme == Scheme::kSgr) {
    map = MakeDeterministicMap(game, options.sample_average);
  }
  std::vector<double> probs = options.probs;
  if (probs.empty()) {
    probs.assign(game.num_players(), 1.0 / game.num_players());
  }

  Trajectory t;
  t.counters = UpdateCounters::Zero(game.num_players());
  Profile x = x0;
  auto record = [&](int k) {
    t.iterations.push_back(k);
    if (reference) {
      t.sq_error.push_back((x.data() - reference->x_star.data()).squaredNorm());
    }
  };
  record(0);
  for (int k = 1; k <= iters; ++k) {
    RngStream step = rng.Substream(k, kRoleStep);
    StepInfo info{k, 0.0, -1, nullptr};
    switch (scheme) {
      case Scheme::kSsgr:
        info.gamma = PolicyStepsize(policy, k);
        x = SsgrStep(game, x, info.gamma, step);
        break;
      case Scheme::kSgr:
        info.gamma = PolicyStepsize(policy, k);
        x = SgrStep(game, x, info.gamma, map);
        break;
      case Scheme::kSagr: {
        std::optional<double> fixed;
        double scale = 1.0;
        if (async) {
          scale = std::get<AsyncHarmonic>(policy).scale;
        } else {
          fixed = PolicyStepsize(policy, k);
        }
        SagrResult r = SagrStep(game, x, t.counters, probs, step, scale, fixed);
        x = std::move(r.x);
        t.counters = std::move(r.counters);
        info.gamma = r.gamma;
        info.selected = r.selected;
        info.counters = &t.counters;
        break;
      }
    }
    if (options.observer) options.observer(x, info);
    if (k % options.record_every == 0 || k == iters) record(k);
  }
  t.final_x = std::move(x);
  return t;
}

}  // namespace qne
