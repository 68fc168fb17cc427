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

#include "qne/harness.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "qne/errors.h"
#include "qne/games.h"
#include "qne/projection.h"

namespace qne {
namespace {

using json = nlohmann::json;

constexpr std::uint64_t kRoleInit = 7;

void CheckKeys(const json& j, const std::set<std::string>& allowed,
               const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
  }
}

template <class T>
T Get(const json& j, const std::string& key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

template <class T>
void Maybe(const json& j, const std::string& key, T& out,
           const std::string& where) {
  if (j.contains(key)) out = Get<T>(j, key, where);
}

template <class T>
void MaybeOpt(const json& j, const std::string& key, std::optional<T>& out,
              const std::string& where) {
  if (j.contains(key)) out = Get<T>(j, key, where);
}

SchemeKind ParseScheme(const std::string& s) {
  if (s == "ssgr") return SchemeKind::kSsgr;
  if (s == "sagr") return SchemeKind::kSagr;
  if (s == "sgr") return SchemeKind::kSgr;
  if (s == "two_stage") return SchemeKind::kTwoStage;
  if (s == "zamgr") return SchemeKind::kZamgr;
  throw ConfigError("unknown scheme: " + s);
}

StepsizePolicy ParsePolicy(const json& j) {
  const std::string w = "policy";
  std::string type = Get<std::string>(j, "type", w);
  if (type == "diminishing") {
    CheckKeys(j, {"type", "gamma0"}, w);
    return Diminishing{Get<double>(j, "gamma0", w)};
  }
  if (type == "constant") {
    CheckKeys(j, {"type", "delta"}, w);
    return Constant{Get<double>(j, "delta", w)};
  }
  if (type == "geometric") {
    CheckKeys(j, {"type", "gamma0", "q"}, w);
    return Geometric{Get<double>(j, "gamma0", w), Get<double>(j, "q", w)};
  }
  if (type == "async") {
    CheckKeys(j, {"type", "scale"}, w);
    AsyncHarmonic a;
    Maybe(j, "scale", a.scale, w);
    return a;
  }
  throw ConfigError("unknown policy type: " + type);
}

json PolicyToJson(const StepsizePolicy& p) {
  if (auto* d = std::get_if<Diminishing>(&p)) {
    return {{"type", "diminishing"}, {"gamma0", d->gamma0}};
  }
  if (auto* c = std::get_if<Constant>(&p)) {
    return {{"type", "constant"}, {"delta", c->delta}};
  }
  if (auto* g = std::get_if<Geometric>(&p)) {
    return {{"type", "geometric"}, {"gamma0", g->gamma0}, {"q", g->q}};
  }
  if (auto* a = std::get_if<AsyncHarmonic>(&p)) {
    return {{"type", "async"}, {"scale", a->scale}};
  }
  throw ConfigError("two-stage policies are given under \"two_stage\"");
}

GapConfig ParseGap(const json& j) {
  const std::string w = "gap";
  CheckKeys(j,
            {"c", "a", "b", "e", "delta", "alpha0", "Gamma", "lambda", "gamma",
             "L1", "batch_scale", "batch_cap", "inner_cap",
             "common_inner_noise"},
            w);
  GapConfig g;
  Maybe(j, "c", g.c, w);
  Maybe(j, "a", g.a, w);
  Maybe(j, "b", g.b, w);
  Maybe(j, "e", g.e, w);
  Maybe(j, "delta", g.delta, w);
  Maybe(j, "alpha0", g.alpha0, w);
  Maybe(j, "Gamma", g.Gamma, w);
  Maybe(j, "lambda", g.lambda, w);
  Maybe(j, "gamma", g.gamma, w);
  MaybeOpt(j, "L1", g.L1, w);
  Maybe(j, "batch_scale", g.batch_scale, w);
  Maybe(j, "batch_cap", g.batch_cap, w);
  Maybe(j, "inner_cap", g.inner_cap, w);
  Maybe(j, "common_inner_noise", g.common_inner_noise, w);
  return g;
}

json GapToJson(const GapConfig& g) {
  json j = {{"c", g.c},           {"a", g.a},
            {"b", g.b},           {"e", g.e},
            {"delta", g.delta},   {"alpha0", g.alpha0},
            {"Gamma", g.Gamma},   {"lambda", g.lambda},
            {"gamma", g.gamma},   {"batch_scale", g.batch_scale},
            {"batch_cap", g.batch_cap}, {"inner_cap", g.inner_cap},
            {"common_inner_noise", g.common_inner_noise}};
  if (g.L1) j["L1"] = *g.L1;
  return j;
}

TwoStageSpec ParseTwoStage(const json& j) {
  const std::string w = "two_stage";
  CheckKeys(j, {"gamma0", "stage2_gamma0", "q", "delta", "switch_iter", "Q"},
            w);
  TwoStageSpec t;
  Maybe(j, "gamma0", t.gamma0, w);
  MaybeOpt(j, "stage2_gamma0", t.stage2_gamma0, w);
  MaybeOpt(j, "q", t.q, w);
  MaybeOpt(j, "delta", t.delta, w);
  MaybeOpt(j, "switch_iter", t.switch_iter, w);
  MaybeOpt(j, "Q", t.Q, w);
  return t;
}

json TwoStageToJson(const TwoStageSpec& t) {
  json j = {{"gamma0", t.gamma0}};
  if (t.stage2_gamma0) j["stage2_gamma0"] = *t.stage2_gamma0;
  if (t.q) j["q"] = *t.q;
  if (t.delta) j["delta"] = *t.delta;
  if (t.switch_iter) j["switch_iter"] = *t.switch_iter;
  if (t.Q) j["Q"] = *t.Q;
  return j;
}

InitSpec ParseInit(const json& j) {
  const std::string w = "init";
  CheckKeys(j, {"type", "low", "high", "x"}, w);
  InitSpec s;
  std::string type = Get<std::string>(j, "type", w);
  if (type == "uniform") {
    s.kind = InitSpec::Kind::kUniform;
  } else if (type == "reference_offset") {
    s.kind = InitSpec::Kind::kReferenceOffset;
    Maybe(j, "low", s.low, w);
    Maybe(j, "high", s.high, w);
  } else if (type == "point") {
    s.kind = InitSpec::Kind::kPoint;
    s.point = Get<std::vector<double>>(j, "x", w);
  } else {
    throw ConfigError("unknown init type: " + type);
  }
  return s;
}

json InitToJson(const InitSpec& s) {
  switch (s.kind) {
    case InitSpec::Kind::kUniform:
      return {{"type", "uniform"}};
    case InitSpec::Kind::kReferenceOffset:
      return {{"type", "reference_offset"}, {"low", s.low}, {"high", s.high}};
    case InitSpec::Kind::kPoint:
      return {{"type", "point"}, {"x", s.point}};
  }
  return {};
}

Vector ToVector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<int>(v.size()));
}

TwoStage ResolveTwoStage(const TwoStageSpec& spec, const GameModel& game) {
  TwoStage t;
  t.stage1.gamma0 = spec.gamma0;
  const int N = game.num_players();
  GameConstants k = game.constants();
  std::optional<double> e0;
  if (spec.delta) {
    if (!k.weak_sharpness || !k.lipschitz || !k.grad_bound_sq) {
      throw ConfigError(game.name() +
                        ": two-stage derivation needs beta, L and M");
    }
    e0 = LinearRateRadius(*spec.delta, *k.weak_sharpness, *k.lipschitz, N);
  }
  if (spec.stage2_gamma0 && spec.q) {
    t.stage2 = {*spec.stage2_gamma0, *spec.q};
  } else if (e0) {
    auto [g, q] = GeometricParams(*e0, *spec.delta, *k.weak_sharpness,
                                  *k.lipschitz, *k.grad_bound_sq, N);
    t.stage2 = {g, q};
  } else {
    throw ConfigError("two_stage needs stage2_gamma0 and q, or delta");
  }
  if (spec.switch_iter) {
    t.switch_iter = *spec.switch_iter;
  } else {
    if (!e0) throw ConfigError("two_stage needs switch_iter, or Q and delta");
    double Q;
    if (spec.Q) {
      Q = *spec.Q;
    } else {
      Vector span = game.joint_feasible().upper() - game.joint_feasible().lower();
      if (!span.allFinite()) {
        throw ConfigError("two_stage on an unbounded set needs Q");
      }
      Q = span.squaredNorm();
    }
    t.switch_iter = TwoStageSwitchIter(Q, N, *e0);
  }
  ValidatePolicy(t);
  return t;
}

Profile InitialPoint(const ExperimentConfig& cfg, const GameModel& game,
                     const ReferenceSolution& ref, RngStream rng) {
  const FeasibleSet& X = game.joint_feasible();
  switch (cfg.init.kind) {
    case InitSpec::Kind::kUniform:
      return game.MakeProfile(SampleFeasible(X, rng));
    case InitSpec::Kind::kReferenceOffset: {
      Vector x = ref.x_star.data();
      for (int j = 0; j < x.size(); ++j) {
        x[j] += rng.Uniform(cfg.init.low, cfg.init.high);
      }
      return game.MakeProfile(Project(X, x));
    }
    case InitSpec::Kind::kPoint:
      return game.MakeProfile(ToVector(cfg.init.point));
  }
  throw ConfigError("bad init");
}

struct PathResult {
  std::vector<int> iterations;
  std::vector<double> rel, sq, residual;
  double final_rel = 0.0;
  int output_index = 0;
  double wall = 0.0;
};

PathResult RunPath(const ExperimentConfig& cfg, const GameModel& game,
                   const ReferenceSolution& ref,
                   const std::optional<TwoStage>& two_stage, int path) {
  auto t0 = std::chrono::steady_clock::now();
  RngStream rng(cfg.seed, {static_cast<std::uint64_t>(path), 0, 0});
  Profile x0 = InitialPoint(cfg, game, ref, rng.Substream(0, kRoleInit));
  const double ref_norm = ref.x_star.data().norm();
  const double scale = ref_norm > 0.0 ? ref_norm : 1.0;
  PathResult out;

  if (cfg.scheme == SchemeKind::kZamgr) {
    const bool residual = game.has_jacobian();
    const double beta = game.num_players() / cfg.gap.gamma;
    auto residual_at = [&](const Profile& x) {
      return ResidualMap(game, beta, x, GradThetaExact(game, cfg.gap.c, x))
          .squaredNorm();
    };
    ZamgrOptions opt;
    opt.record_every = cfg.record_every;
    if (residual) {
      out.residual.push_back(residual_at(x0));
      opt.observer = [&](const Profile& x, int k, int) {
        if (k % cfg.record_every == 0 || k == cfg.iters) {
          out.residual.push_back(residual_at(x));
        }
      };
    }
    ZamgrResult r = ZamgrRun(game, cfg.gap, x0, cfg.iters, rng, ref, opt);
    out.iterations = r.trajectory.iterations;
    out.sq = r.trajectory.sq_error;
    out.final_rel = (r.x_R.data() - ref.x_star.data()).norm() / scale;
    out.output_index = r.R;
  } else {
    Scheme scheme = Scheme::kSsgr;
    StepsizePolicy policy;
    switch (cfg.scheme) {
      case SchemeKind::kSsgr: scheme = Scheme::kSsgr; break;
      case SchemeKind::kSagr: scheme = Scheme::kSagr; break;
      default: scheme = Scheme::kSgr; break;
    }
    if (cfg.scheme == SchemeKind::kTwoStage) {
      policy = *two_stage;
    } else {
      policy = *cfg.policy;
    }
    RunOptions opt;
    opt.record_every = cfg.record_every;
    opt.probs = cfg.probs;
    Trajectory t = RunScheme(game, scheme, policy, x0, cfg.iters, rng, ref, opt);
    out.iterations = t.iterations;
    out.sq = t.sq_error;
    out.final_rel = std::sqrt(out.sq.back()) / scale;
    out.output_index = cfg.iters;
  }
  for (double s : out.sq) out.rel.push_back(std::sqrt(s) / scale);
  out.wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                 .count();
  return out;
}

}  // namespace

std::string SchemeKindName(SchemeKind s) {
  switch (s) {
    case SchemeKind::kSsgr: return "ssgr";
    case SchemeKind::kSagr: return "sagr";
    case SchemeKind::kSgr: return "sgr";
    case SchemeKind::kTwoStage: return "two_stage";
    case SchemeKind::kZamgr: return "zamgr";
  }
  return "?";
}

ExperimentConfig ParseConfig(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  const std::string w = "config";
  CheckKeys(j,
            {"game", "scheme", "policy", "two_stage", "gap", "probs", "init",
             "paths", "iters", "K", "seed", "record_every", "output",
             "reference_tol", "workers"},
            w);
  ExperimentConfig c;
  if (j.contains("game")) {
    const json& g = j["game"];
    if (g.is_string()) {
      c.game = g.get<std::string>();
    } else {
      CheckKeys(g, {"preset", "overrides"}, "game");
      c.game = Get<std::string>(g, "preset", "game");
      if (g.contains("overrides")) c.overrides_json = g["overrides"].dump();
    }
  }
  if (j.contains("scheme")) c.scheme = ParseScheme(Get<std::string>(j, "scheme", w));
  if (j.contains("policy")) c.policy = ParsePolicy(j["policy"]);
  if (j.contains("two_stage")) c.two_stage = ParseTwoStage(j["two_stage"]);
  if (j.contains("gap")) c.gap = ParseGap(j["gap"]);
  if (j.contains("init")) c.init = ParseInit(j["init"]);
  Maybe(j, "probs", c.probs, w);
  Maybe(j, "paths", c.paths, w);
  Maybe(j, "iters", c.iters, w);
  Maybe(j, "K", c.iters, w);
  Maybe(j, "seed", c.seed, w);
  Maybe(j, "record_every", c.record_every, w);
  Maybe(j, "output", c.output, w);
  Maybe(j, "reference_tol", c.reference_tol, w);
  Maybe(j, "workers", c.workers, w);
  ValidateConfig(c);
  return c;
}

ExperimentConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseConfig(ss.str());
}

std::string ConfigToJson(const ExperimentConfig& c) {
  json j;
  j["game"] = {{"preset", c.game}, {"overrides", json::parse(c.overrides_json)}};
  j["scheme"] = SchemeKindName(c.scheme);
  if (c.policy) j["policy"] = PolicyToJson(*c.policy);
  if (c.two_stage) j["two_stage"] = TwoStageToJson(*c.two_stage);
  if (c.scheme == SchemeKind::kZamgr) j["gap"] = GapToJson(c.gap);
  if (!c.probs.empty()) j["probs"] = c.probs;
  j["init"] = InitToJson(c.init);
  j["paths"] = c.paths;
  j["iters"] = c.iters;
  j["seed"] = c.seed;
  j["record_every"] = c.record_every;
  if (!c.output.empty()) j["output"] = c.output;
  j["reference_tol"] = c.reference_tol;
  return j.dump(2);
}

void ValidateConfig(const ExperimentConfig& c) {
  auto names = PresetGameNames();
  if (std::find(names.begin(), names.end(), c.game) == names.end()) {
    throw ConfigError("unknown game preset: " + c.game);
  }
  if (c.paths < 1) throw ConfigError("paths must be >= 1");
  if (c.iters < 1) throw ConfigError("iters must be >= 1");
  if (c.record_every < 1) throw ConfigError("record_every must be >= 1");
  if (!(c.reference_tol > 0)) throw ConfigError("reference_tol must be > 0");
  if (c.workers < 0) throw ConfigError("workers must be >= 0");
  switch (c.scheme) {
    case SchemeKind::kSsgr:
    case SchemeKind::kSagr:
    case SchemeKind::kSgr:
      if (!c.policy) {
        throw ConfigError(SchemeKindName(c.scheme) + " needs a policy");
      }
      try {
        ValidatePolicy(*c.policy);
      } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("policy: ") + e.what());
      }
      break;
    case SchemeKind::kTwoStage:
      if (!c.two_stage) throw ConfigError("two_stage scheme needs two_stage");
      break;
    case SchemeKind::kZamgr:
      break;
  }
}

std::shared_ptr<GameModel> BuildGame(const std::string& preset,
                                     const std::string& overrides_json) {
  json o;
  try {
    o = json::parse(overrides_json);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("overrides: ") + e.what());
  }
  const std::string w = "overrides";
  if (preset == "network") {
    CheckKeys(o, {"M", "b_low", "b_high", "beta_mean", "beta_spread", "lb",
                  "ub"}, w);
    NetworkParams p = DefaultNetworkParams();
    Maybe(o, "M", p.M, w);
    Maybe(o, "b_low", p.b_low, w);
    Maybe(o, "b_high", p.b_high, w);
    Maybe(o, "beta_mean", p.beta_mean, w);
    Maybe(o, "beta_spread", p.beta_spread, w);
    if (o.contains("lb")) p.lb = ToVector(Get<std::vector<double>>(o, "lb", w));
    if (o.contains("ub")) p.ub = ToVector(Get<std::vector<double>>(o, "ub", w));
    if (p.lb.size() != 6 || p.ub.size() != 6) {
      throw ConfigError("network lb/ub need one entry per link");
    }
    return std::make_shared<NetworkCongestionGame>(p);
  }
  if (preset == "cournot") {
    CheckKeys(o, {"N", "c", "a", "b", "lower", "upper"}, w);
    CournotParams p;
    Maybe(o, "N", p.N, w);
    Maybe(o, "c", p.c, w);
    Maybe(o, "a", p.a, w);
    Maybe(o, "b", p.b, w);
    Maybe(o, "lower", p.lower, w);
    Maybe(o, "upper", p.upper, w);
    return std::make_shared<CournotGame>(p);
  }
  if (preset == "copositive") {
    CheckKeys(o, {"N", "lower", "upper", "mean_utility", "xi_spread"}, w);
    CopositiveParams p;
    Maybe(o, "N", p.N, w);
    Maybe(o, "lower", p.lower, w);
    Maybe(o, "upper", p.upper, w);
    Maybe(o, "mean_utility", p.mean_utility, w);
    Maybe(o, "xi_spread", p.xi_spread, w);
    return std::make_shared<CopositiveCongestionGame>(p);
  }
  throw ConfigError("unknown game preset: " + preset);
}

ReferenceSolution BuildReference(const GameModel& game, double tol) {
  if (auto* g = dynamic_cast<const NetworkCongestionGame*>(&game)) {
    return NetworkReferenceSolution(*g, tol);
  }
  if (auto* g = dynamic_cast<const CournotGame*>(&game)) {
    return CournotReferenceSolution(*g);
  }
  if (auto* g = dynamic_cast<const CopositiveCongestionGame*>(&game)) {
    return CopositiveReferenceSolution(*g);
  }
  throw ConfigError(game.name() + ": no reference solution");
}

double MeanOf(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double SampleStd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = MeanOf(v), s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

Aggregate AggregateRecord(const RunRecord& r) {
  Aggregate a;
  const size_t K = r.iterations.size();
  auto column = [&](const std::vector<std::vector<double>>& m, size_t k) {
    std::vector<double> c;
    c.reserve(m.size());
    for (const auto& row : m) c.push_back(row[k]);
    return c;
  };
  for (size_t k = 0; k < K; ++k) {
    auto rel = column(r.rel_err, k);
    a.mean_rel_err.push_back(MeanOf(rel));
    a.std_rel_err.push_back(SampleStd(rel));
    a.mean_sq_err.push_back(MeanOf(column(r.sq_err, k)));
    if (r.has_residual()) {
      a.mean_residual_sq.push_back(MeanOf(column(r.residual_sq, k)));
    }
  }
  return a;
}

int ResolveWorkers(int requested) {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  int n = requested > 0 ? requested : std::max(1, hw);
  if (const char* env = std::getenv("QNE_WORKERS")) {
    int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return std::max(1, n);
}

RunRecord RunExperiment(const ExperimentConfig& cfg) {
  ValidateConfig(cfg);
  std::shared_ptr<GameModel> game = BuildGame(cfg.game, cfg.overrides_json);
  ReferenceSolution ref = BuildReference(*game, cfg.reference_tol);
  std::optional<TwoStage> two_stage;
  if (cfg.scheme == SchemeKind::kTwoStage) {
    two_stage = ResolveTwoStage(*cfg.two_stage, *game);
  }
  if (cfg.scheme == SchemeKind::kZamgr) cfg.gap.Validate(game->num_players());

  std::vector<PathResult> results(cfg.paths);
  std::vector<std::exception_ptr> errors(cfg.paths);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int p = next++; p < cfg.paths; p = next++) {
      try {
        results[p] = RunPath(cfg, *game, ref, two_stage, p);
      } catch (...) {
        errors[p] = std::current_exception();
      }
    }
  };
  const int workers = std::min(ResolveWorkers(cfg.workers), cfg.paths);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  RunRecord r;
  r.iterations = results[0].iterations;
  for (auto& p : results) {
    if (p.iterations != r.iterations) {
      throw std::logic_error("paths recorded different checkpoints");
    }
    r.rel_err.push_back(std::move(p.rel));
    r.sq_err.push_back(std::move(p.sq));
    if (!p.residual.empty()) r.residual_sq.push_back(std::move(p.residual));
    r.wall_seconds.push_back(p.wall);
    r.final_rel_err.push_back(p.final_rel);
    r.output_index.push_back(p.output_index);
  }
  r.provenance = ref.provenance;
  r.reference_tolerance = ref.tolerance;
  const Vector& xs = ref.x_star.data();
  r.reference_x.assign(xs.data(), xs.data() + xs.size());
  if (!cfg.output.empty()) WriteRecord(r, cfg.output);
  return r;
}

std::string FormatDouble(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string AggregateCsv(const RunRecord& r) {
  Aggregate a = AggregateRecord(r);
  std::ostringstream out;
  out << "k,mean_rel_err,std_rel_err,mean_sq_err";
  if (r.has_residual()) out << ",mean_residual_sq";
  out << "\n";
  for (size_t k = 0; k < r.iterations.size(); ++k) {
    out << r.iterations[k] << ',' << FormatDouble(a.mean_rel_err[k]) << ','
        << FormatDouble(a.std_rel_err[k]) << ','
        << FormatDouble(a.mean_sq_err[k]);
    if (r.has_residual()) out << ',' << FormatDouble(a.mean_residual_sq[k]);
    out << "\n";
  }
  return out.str();
}

std::string PathsCsv(const RunRecord& r) {
  std::ostringstream out;
  out << "path,k,rel_err\n";
  for (int p = 0; p < r.num_paths(); ++p) {
    for (size_t k = 0; k < r.iterations.size(); ++k) {
      out << p << ',' << r.iterations[k] << ','
          << FormatDouble(r.rel_err[p][k]) << "\n";
    }
  }
  return out.str();
}

std::string SidecarPath(const std::string& path, const std::string& suffix) {
  std::string stem = path;
  if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".csv") {
    stem.resize(stem.size() - 4);
  }
  return stem + suffix;
}

void WriteRecord(const RunRecord& r, const std::string& path) {
  auto write = [](const std::string& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + p);
    f << text;
    if (!f) throw ConfigError("write failed: " + p);
  };
  write(path, AggregateCsv(r));
  write(SidecarPath(path, "_paths.csv"), PathsCsv(r));
  json meta;
  meta["reference"] = {{"provenance", ProvenanceName(r.provenance)},
                       {"tolerance", r.reference_tolerance},
                       {"x_star", r.reference_x}};
  meta["final_rel_err"] = r.final_rel_err;
  meta["output_index"] = r.output_index;
  meta["mean_final_rel_err"] = MeanOf(r.final_rel_err);
  write(SidecarPath(path, "_meta.json"), meta.dump(2) + "\n");
}

RateFitResult RateFit(const std::vector<int>& iterations,
                      const std::vector<double>& values, int k_lo, int k_hi,
                      FitMode mode) {
  if (iterations.size() != values.size()) {
    throw InvalidArgument("iterations and values differ in length");
  }
  std::vector<double> xs, ys;
  for (size_t j = 0; j < iterations.size(); ++j) {
    int k = iterations[j];
    if (k < k_lo || k > k_hi || !(values[j] > 0.0)) continue;
    if (mode == FitMode::kLogLog && k <= 0) continue;
    xs.push_back(mode == FitMode::kLogLog ? std::log(static_cast<double>(k))
                                          : static_cast<double>(k));
    ys.push_back(std::log(values[j]));
  }
  if (xs.size() < 10) {
    throw InvalidArgument("rate fit needs at least 10 positive checkpoints");
  }
  const double n = static_cast<double>(xs.size());
  double mx = MeanOf(xs), my = MeanOf(ys);
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t j = 0; j < xs.size(); ++j) {
    sxx += (xs[j] - mx) * (xs[j] - mx);
    sxy += (xs[j] - mx) * (ys[j] - my);
    syy += (ys[j] - my) * (ys[j] - my);
  }
  RateFitResult r;
  r.points = static_cast<int>(n);
  r.slope = sxx > 0 ? sxy / sxx : 0.0;
  r.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return r;
}

RateFitResult RateFit(const RunRecord& record, int k_lo, int k_hi,
                      FitMode mode) {
  return RateFit(record.iterations, AggregateRecord(record).mean_sq_err, k_lo,
                 k_hi, mode);
}

std::pair<long long, long long> CompareRuns(const RunRecord& a,
                                            const RunRecord& b,
                                            double threshold) {
  auto first = [threshold](const RunRecord& r) -> long long {
    Aggregate agg = AggregateRecord(r);
    for (size_t k = 0; k < r.iterations.size(); ++k) {
      if (agg.mean_rel_err[k] <= threshold) return r.iterations[k];
    }
    return kNotReached;
  };
  return {first(a), first(b)};
}

std::vector<NamedConfig> ReproduceBundle(const std::string& figure,
                                         std::uint64_t seed) {
  std::vector<NamedConfig> out;
  if (figure == "fig1") {
    for (double g : {0.1, 0.5, 1.0}) {
      ExperimentConfig c;
      c.game = "network";
      c.paths = 50;
      c.iters = 2000;
      c.record_every = 10;
      c.seed = seed;
      c.scheme = SchemeKind::kSsgr;
      c.policy = Diminishing{g};
      out.push_back({"ssgr_gamma0_" + FormatDouble(g), c});
      c.scheme = SchemeKind::kSagr;
      c.policy = AsyncHarmonic{g};
      out.push_back({"sagr_scale_" + FormatDouble(g), c});
    }
    return out;
  }
  if (figure == "fig2a") {
    ExperimentConfig c;
    c.game = "cournot";
    c.paths = 10;
    c.iters = 3000;
    c.seed = seed;
    c.scheme = SchemeKind::kSgr;
    c.policy = Diminishing{1.0};
    out.push_back({"sgr", c});
    c.scheme = SchemeKind::kTwoStage;
    c.policy.reset();
    TwoStageSpec t;
    t.gamma0 = 1.0;
    t.delta = 0.1;
    t.Q = 25600.0;
    c.two_stage = t;
    out.push_back({"two_stage", c});
    return out;
  }
  if (figure == "fig2b") {
    for (int K : {100, 400, 1600}) {
      ExperimentConfig c;
      c.game = "copositive";
      c.scheme = SchemeKind::kZamgr;
      c.paths = 10;
      c.iters = K;
      c.seed = seed;
      c.record_every = std::max(1, K / 100);
      c.init.kind = InitSpec::Kind::kReferenceOffset;
      c.init.low = 0.0;
      c.init.high = 0.3;
      c.gap.gamma = 0.02;
      c.gap.inner_cap = 500;
      c.gap.batch_scale = 0.01;
      out.push_back({"zamgr_K" + std::to_string(K), c});
    }
    return out;
  }
  throw ConfigError("unknown figure: " + figure);
}

}  // namespace qne
