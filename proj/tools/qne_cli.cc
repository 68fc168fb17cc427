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

// Command-line front end: run, check, reproduce, oracle.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qne/errors.h"
#include "qne/games.h"
#include "qne/harness.h"
#include "qne/properties.h"

namespace {

using json = nlohmann::json;
using namespace qne;

constexpr int kOk = 0;
constexpr int kRefuted = 1;
constexpr int kConfig = 2;
constexpr int kNumerical = 3;
constexpr int kInconclusive = 4;

struct RunArgs {
  std::string config;
  std::string game;
  std::string scheme = "ssgr";
  std::string policy = "diminishing";
  double gamma0 = 1.0;
  std::optional<int> iters;
  std::optional<int> paths;
  std::optional<std::uint64_t> seed;
  std::optional<int> record_every;
  std::string out;
};

struct CheckArgs {
  std::string game;
  std::vector<std::string> properties;
  int samples = 1000;
  std::uint64_t seed = 0;
};

struct ReproduceArgs {
  std::string figure;
  std::uint64_t seed = 42;
  std::string out_dir = "reproduce_out";
  std::optional<int> paths;
  std::optional<int> iters;
};

struct OracleArgs {
  std::string game = "network";
  double tol = 1e-8;
};

void PrintSummary(const std::string& name, const RunRecord& r) {
  Aggregate a = AggregateRecord(r);
  double wall = 0.0;
  for (double w : r.wall_seconds) wall += w;
  std::printf("%s: final mean rel err %s, output-point mean rel err %s, "
              "wall %.2fs\n",
              name.c_str(), FormatDouble(a.mean_rel_err.back()).c_str(),
              FormatDouble(MeanOf(r.final_rel_err)).c_str(), wall);
}

ExperimentConfig ConfigFromFlags(const RunArgs& a) {
  ExperimentConfig c;
  if (!a.config.empty()) {
    c = LoadConfig(a.config);
  } else {
    c.game = a.game;
    json j = {{"scheme", a.scheme}};
    c.scheme = ParseConfig(j.dump()).scheme;
    if (c.scheme == SchemeKind::kZamgr) {
      c = ReproduceBundle("fig2b", 0).front().config;
      c.game = a.game;
      c.record_every = 1;
    } else if (c.scheme == SchemeKind::kTwoStage) {
      TwoStageSpec t;
      t.gamma0 = a.gamma0;
      t.delta = 0.1;
      c.two_stage = t;
    } else if (a.policy == "async") {
      c.policy = AsyncHarmonic{a.gamma0};
    } else if (a.policy == "constant") {
      c.policy = Constant{a.gamma0};
    } else if (a.policy == "diminishing") {
      c.policy = Diminishing{a.gamma0};
    } else {
      throw ConfigError("unknown policy: " + a.policy);
    }
  }
  if (a.iters) c.iters = *a.iters;
  if (a.paths) c.paths = *a.paths;
  if (a.seed) c.seed = *a.seed;
  if (a.record_every) c.record_every = *a.record_every;
  if (!a.out.empty()) c.output = a.out;
  ValidateConfig(c);
  return c;
}

int CmdRun(const RunArgs& a) {
  if (a.config.empty() && a.game.empty()) {
    throw ConfigError("run needs --config or --game");
  }
  ExperimentConfig c = ConfigFromFlags(a);
  RunRecord r = RunExperiment(c);
  PrintSummary(c.game + "/" + SchemeKindName(c.scheme), r);
  return kOk;
}

std::vector<PropertyReport> RunCheck(const GameModel& game, Property p,
                                     int samples, RngStream& rng,
                                     double tol) {
  auto ref = [&] { return BuildReference(game, tol).x_star; };
  switch (p) {
    case Property::kAA: return {CheckAA(game, ref(), samples, rng)};
    case Property::kQG: return {CheckQG(game, ref(), samples, rng)};
    case Property::kWS: return {CheckWS(game, ref(), samples, rng)};
    case Property::kPotential: return {CheckPotential(game, samples, rng)};
    case Property::kMonotone: return {MonotoneProbe(game, samples, rng)};
    case Property::kSP: {
      if (auto* net = dynamic_cast<const NetworkCongestionGame*>(&game)) {
        std::vector<PropertyReport> out;
        for (int l = 0; l < net->num_links(); ++l) {
          auto link = NetworkLinkGame(*net, l);
          PropertyReport r = CheckSP(*link, samples, rng);
          r.note = "link " + std::to_string(l + 1);
          out.push_back(r);
        }
        return out;
      }
      return {CheckSP(game, samples, rng)};
    }
    case Property::kStrictCopositive: {
      if (!game.has_jacobian()) {
        throw UnsupportedOperation(game.name() + ": no Jacobian");
      }
      Profile xs = ref();
      Matrix J = game.JacobianOfExpectedMap(xs);
      PropertyReport r =
          CheckStrictCopositivity(J, Cone::kFullSpace, samples, rng);
      r.note = "Jacobian at the reference point, full space";
      return {r};
    }
  }
  return {};
}

int CmdCheck(const CheckArgs& a) {
  auto game = BuildGame(a.game);
  RngStream rng(a.seed, {0, 0, 0xC4EC});
  json reports = json::array();
  int code = kOk;
  for (const std::string& name : a.properties) {
    auto p = ParseProperty(name);
    if (!p) throw ConfigError("unknown property: " + name);
    for (const PropertyReport& r : RunCheck(*game, *p, a.samples, rng, 1e-8)) {
      reports.push_back(json::parse(ReportToJson(r)));
      if (r.verdict == Verdict::kRefuted) {
        code = kRefuted;
      } else if (r.verdict == Verdict::kInconclusive && code == kOk) {
        code = kInconclusive;
      }
    }
  }
  json out = {{"game", a.game}, {"reports", reports}};
  std::cout << out.dump(2) << std::endl;
  return code;
}

int CmdReproduce(const ReproduceArgs& a) {
  auto bundle = ReproduceBundle(a.figure, a.seed);
  std::filesystem::create_directories(a.out_dir);
  std::vector<RunRecord> records;
  for (auto& nc : bundle) {
    if (a.paths) nc.config.paths = *a.paths;
    if (a.iters) nc.config.iters = *a.iters;
    nc.config.output =
        (std::filesystem::path(a.out_dir) / (nc.name + ".csv")).string();
    records.push_back(RunExperiment(nc.config));
    PrintSummary(nc.name, records.back());
  }
  if (a.figure == "fig2a") {
    auto [sgr, two] = CompareRuns(records[0], records[1], 1e-3);
    auto show = [](long long k) {
      return k == kNotReached ? std::string("not reached") : std::to_string(k);
    };
    std::printf("iterations to mean rel err <= 1e-3: sgr %s, two_stage %s\n",
                show(sgr).c_str(), show(two).c_str());
  }
  return kOk;
}

int CmdOracle(const OracleArgs& a) {
  auto game = BuildGame(a.game);
  ReferenceSolution r = BuildReference(*game, a.tol);
  const Vector& x = r.x_star.data();
  json out = {{"game", a.game},
              {"provenance", ProvenanceName(r.provenance)},
              {"tolerance", r.tolerance},
              {"natural_residual", NaturalResidual(*game, r.x_star)},
              {"x_star", std::vector<double>(x.data(), x.data() + x.size())}};
  std::cout << out.dump(2) << std::endl;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi-Nash equilibrium solvers and experiments"};
  app.require_subcommand(1, 1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run a Monte Carlo experiment");
  run_cmd->add_option("--config", run.config, "JSON experiment config");
  run_cmd->add_option("--game", run.game, "network | cournot | copositive");
  run_cmd->add_option("--scheme", run.scheme,
                      "ssgr | sagr | sgr | two_stage | zamgr");
  run_cmd->add_option("--policy", run.policy, "diminishing | constant | async");
  run_cmd->add_option("--gamma0", run.gamma0, "stepsize constant");
  run_cmd->add_option("--iters,--K", run.iters, "iterations (K for zamgr)");
  run_cmd->add_option("--paths", run.paths, "replications");
  run_cmd->add_option("--seed", run.seed, "seed");
  run_cmd->add_option("--record-every", run.record_every, "checkpoint stride");
  run_cmd->add_option("--out", run.out, "output CSV");

  CheckArgs check;
  auto* check_cmd = app.add_subcommand("check", "Check structural properties");
  check_cmd->add_option("--game", check.game)->required();
  check_cmd->add_option("--property", check.properties,
                        "aa | qg | sp | ws | potential | monotone | copositive")
      ->required()
      ->delimiter(',');
  check_cmd->add_option("--samples", check.samples);
  check_cmd->add_option("--seed", check.seed);

  ReproduceArgs rep;
  auto* rep_cmd = app.add_subcommand("reproduce", "Run a figure bundle");
  rep_cmd->add_option("figure", rep.figure, "fig1 | fig2a | fig2b")->required();
  rep_cmd->add_option("--seed", rep.seed);
  rep_cmd->add_option("--out-dir", rep.out_dir);
  rep_cmd->add_option("--paths", rep.paths);
  rep_cmd->add_option("--iters", rep.iters);

  OracleArgs oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "Compute a reference point");
  oracle_cmd->add_option("--game", oracle.game);
  oracle_cmd->add_option("--tol", oracle.tol);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    if (*run_cmd) return CmdRun(run);
    if (*check_cmd) return CmdCheck(check);
    if (*rep_cmd) return CmdReproduce(rep);
    if (*oracle_cmd) return CmdOracle(oracle);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (*run_cmd) std::cerr << run_cmd->help();
    return kConfig;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const UnsupportedOperation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const OracleFailure& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumerical;
  } catch (const DomainError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
  return kConfig;
}
