// Copyright 2026 The dsval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dsval/cli.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dsval/bench.h"
#include "dsval/bounds.h"
#include "dsval/empirical_game.h"
#include "dsval/estimators.h"
#include "dsval/exact.h"
#include "dsval/game.h"
#include "dsval/parallel.h"
#include "dsval/regression_game.h"
#include "dsval/rng.h"

namespace dsval {
namespace {

using Json = nlohmann::ordered_json;

std::string FormatDouble(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

struct Options {
  // Shared by every leaf command.
  uint64_t seed = 0;
  std::string format = "auto";
  std::string out;
  int threads = 1;
  std::string config;

  // Game selection.
  std::string sizes;
  std::string sizes_file;
  std::string game = "sqrt";
  std::string data;
  std::string label = "label";
  std::string task = "clf";
  int players = 0;
  double holdout = 0.10;
  int steps = 20;
  double lr = 0.1;
  int batch = 32;
  int proxy_draws = 1;

  // exact / estimate
  std::string form = "subsets";
  std::string method = "du";
  int64_t budget = 0;

  // bench compare
  int num_players = 10;
  std::string sizes_dist;
  std::vector<std::string> methods;
  int estimations = 25;
  int repetitions = 10;

  // converge
  std::vector<int> converge_players{10, 100, 500};
  int64_t samples = 100000;

  // bounds
  std::vector<int> grid{3, 4, 5, 7, 10, 15, 20, 30, 50, 75, 100, 150, 200, 300, 500};
  int64_t nmax = 100;
  int draws = 100;
  double delta = 0.1;
  bool per_draw = false;
  int rho_points = 200;

  // oracle
  int d = 10;
  double sigma = 1.0;
  std::vector<int64_t> oracle_n{50, 100, 500};
  int64_t mc_reps = 2000;
  int64_t test_samples = 2000;
  std::string sigma_spec = "identity";
  std::string theta = "ones";
};

// "name" or "name:key=value,key=value".
struct GameName {
  std::string name;
  std::map<std::string, std::string> params;

  static GameName Parse(const std::string& text) {
    GameName g;
    const auto colon = text.find(':');
    g.name = text.substr(0, colon);
    if (colon == std::string::npos) return g;
    std::stringstream rest(text.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw std::invalid_argument("game parameter '" + item +
                                    "' is not key=value");
      }
      g.params[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return g;
  }

  void Allow(std::initializer_list<const char*> keys) const {
    for (const auto& [key, value] : params) {
      if (std::none_of(keys.begin(), keys.end(),
                       [&](const char* k) { return key == k; })) {
        throw std::invalid_argument("unknown parameter '" + key + "' for game " +
                                    name);
      }
    }
  }

  double Number(const std::string& key, double fallback) const {
    const auto it = params.find(key);
    if (it == params.end()) return fallback;
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) {
      throw std::invalid_argument("bad value for " + key + ": " + it->second);
    }
    return v;
  }
};

CardinalUtility BuildCardinal(const GameName& g, const GameSpec& spec) {
  if (g.name == "sqrt") {
    g.Allow({});
    return CardinalUtility([](double n) { return std::sqrt(n); });
  }
  if (g.name == "square") {
    g.Allow({});
    return CardinalUtility([](double n) { return n * n; });
  }
  if (g.name == "linear") {
    g.Allow({});
    return CardinalUtility([](double n) { return n; });
  }
  if (g.name == "regression") {
    g.Allow({"d", "sigma", "mode"});
    const double d = g.Number("d", 10);
    if (d != std::floor(d)) throw std::invalid_argument("d must be an integer");
    auto params = RegressionGameParams::Make(static_cast<int>(d), g.Number("sigma", 1.0));
    params.Validate();
    return ClosedFormUtility(params);
  }
  if (g.name == "fig2") {
    g.Allow({"nmax"});
    return SaturatingUtility(SaturationExponent(spec.total()));
  }
  throw std::invalid_argument("unknown game '" + g.name +
                              "' (sqrt, square, linear, regression, fig2)");
}

struct Context {
  std::shared_ptr<const TabularDataset> data;
  ModelKind model = ModelKind::kLogistic;
};

Context LoadContext(const Options& o) {
  Context ctx;
  if (o.data.empty()) return ctx;
  const Task task = ParseTask(o.task);
  ctx.data = std::make_shared<const TabularDataset>(LoadCsv(o.data, o.label, task));
  ctx.model = DefaultModel(task);
  return ctx;
}

GameSpec ResolveSizes(const Options& o, const Context& ctx) {
  if (!o.sizes.empty() && !o.sizes_file.empty()) {
    throw std::invalid_argument("--sizes and --sizes-file are exclusive");
  }
  if (!o.sizes.empty()) return GameSpec::Parse(o.sizes);
  if (!o.sizes_file.empty()) return GameSpec::FromFile(o.sizes_file);
  if (ctx.data && o.players > 0) {
    const int64_t rows = ctx.data->rows();
    const int64_t holdout = std::llround(o.holdout * static_cast<double>(rows));
    const int64_t each = (rows - holdout) / o.players;
    return GameSpec(std::vector<int64_t>(o.players, each));
  }
  throw std::invalid_argument(
      "give --sizes or --sizes-file (or --data with --players)");
}

ProxyOptions MakeProxyOptions(const Options& o) {
  ProxyOptions p;
  p.m_draws = o.proxy_draws;
  p.training = {o.steps, o.lr, o.batch};
  return p;
}

ComparisonGame BuildGame(const Options& o, const Context& ctx,
                         const GameSpec& spec) {
  if (ctx.data) {
    const Partition partition =
        PartitionData(*ctx.data, spec, DeriveSeed(o.seed, {kTagPartition}), o.holdout);
    return MakeEmpiricalComparisonGame(ctx.data, partition, ctx.model,
                                       DeriveSeed(o.seed, {kTagTraining}),
                                       MakeProxyOptions(o));
  }
  const GameName g = GameName::Parse(o.game);
  ComparisonGame game = MakeCardinalComparisonGame(BuildCardinal(g, spec), spec);
  if (g.name == "regression") {
    const std::string mode = g.params.count("mode") ? g.params.at("mode") : "closed";
    if (mode == "empirical") {
      const auto params =
          RegressionGameParams::Make(static_cast<int>(g.Number("d", 10)), g.Number("sigma", 1.0));
      game.utility = MakeRegressionSetUtility(
          params, Eigen::MatrixXd::Identity(params.d, params.d),
          Eigen::VectorXd::Ones(params.d), spec, RegressionUtilityMode::kEmpirical,
          DeriveSeed(o.seed, {kTagRegressionData}), o.test_samples);
    } else if (mode != "closed") {
      throw std::invalid_argument("regression mode must be closed or empirical");
    }
  }
  return game;
}

// Run manifest: every option of the leaf command except output plumbing.
Json Manifest(const CLI::App& leaf, const std::string& command) {
  Json options = Json::object();
  for (const CLI::Option* opt : leaf.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help" || name == "out" || name == "threads" || name == "config") {
      continue;
    }
    std::string value;
    if (opt->get_expected_min() == 0) {
      value = opt->count() > 0 ? "true" : "false";
    } else if (opt->count() > 0) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    } else {
      value = opt->get_default_str();
    }
    options[name] = value;
  }
  Json m;
  m["tool"] = "dsval";
  m["version"] = DSVAL_VERSION;
  m["command"] = command;
  m["options"] = options;
  return m;
}

std::string CsvManifest(const Json& manifest) {
  std::string out = "# dsval version " + manifest["version"].get<std::string>() + "\n";
  out += "# command: " + manifest["command"].get<std::string>() + "\n";
  for (const auto& [key, value] : manifest["options"].items()) {
    out += "# " + key + " = " + value.get<std::string>() + "\n";
  }
  return out;
}

std::string ResolveFormat(const Options& o, const char* fallback) {
  if (o.format == "auto") return fallback;
  return o.format;
}

std::string RenderValuation(const ValuationVector& v, const GameSpec& spec,
                            const Json& manifest, const std::string& format) {
  if (format == "json") {
    Json j = Json::parse(ToJson(v));
    j["sizes"] = spec.sizes();
    j["manifest"] = manifest;
    return j.dump(2) + "\n";
  }
  std::string out = CsvManifest(manifest) + "player,size,value\n";
  for (std::size_t i = 0; i < v.values.size(); ++i) {
    out += std::to_string(i) + "," + std::to_string(spec.sizes()[i]) + "," +
           FormatDouble(v.values[i]) + "\n";
  }
  return out;
}

std::string RunExact(const Options& o, const Json& manifest, bool& computing) {
  const Context ctx = LoadContext(o);
  const GameSpec spec = ResolveSizes(o, ctx);
  ExactConfig config;
  if (o.form == "permutations") {
    config.form = ExactForm::kPermutations;
  } else if (o.form != "subsets") {
    throw std::invalid_argument("--form must be subsets or permutations");
  }
  const ComparisonGame game = BuildGame(o, ctx, spec);
  computing = true;
  const ValuationVector v = ExactShapley(game.utility, spec, config);
  return RenderValuation(v, spec, manifest, ResolveFormat(o, "json"));
}

std::string RunEstimate(const Options& o, const Json& manifest, bool& computing) {
  const Context ctx = LoadContext(o);
  const GameSpec spec = ResolveSizes(o, ctx);
  const Method method = ParseMethod(o.method);
  const int64_t budget = o.budget > 0 ? o.budget : spec.num_players();
  const ComparisonGame game = BuildGame(o, ctx, spec);
  computing = true;
  ValuationVector v;
  if (method == Method::kDu || method == Method::kDuPlusPlus) {
    v = game.du_estimate(method, o.seed);
    if (game.proxy_seeded) v.seed = o.seed;
  } else {
    v = Estimate(game.utility, nullptr, spec, {method, budget, o.seed});
  }
  return RenderValuation(v, spec, manifest, ResolveFormat(o, "json"));
}

std::string RunCompare(const Options& o, const Json& manifest, bool& computing) {
  const Context ctx = LoadContext(o);
  SizeDistribution dist;
  if (!o.sizes.empty() || !o.sizes_file.empty()) {
    dist.kind = SizeDistribution::Kind::kExplicit;
    dist.sizes = ResolveSizes(o, ctx).sizes();
  } else if (!o.sizes_dist.empty()) {
    dist = SizeDistribution::Parse(o.sizes_dist);
  } else {
    const GameName g = GameName::Parse(o.game);
    dist = g.name == "fig2" && !ctx.data
               ? SizeDistribution{SizeDistribution::Kind::kUniformRange, 1,
                                  static_cast<int64_t>(g.Number("nmax", 100)), {}}
               : SizeDistribution::Parse("uniform:10:1000");
  }
  const GameSpec spec = dist.Draw(o.num_players, DeriveSeed(o.seed, {kTagSizes}));

  ComparisonConfig config;
  config.num_players = o.num_players;
  config.size_distribution = dist;
  config.budget_terms = o.budget > 0 ? o.budget : o.num_players;
  config.estimations_per_mse = o.estimations;
  config.mse_repetitions = o.repetitions;
  config.master_seed = o.seed;
  if (o.methods.empty()) {
    config.methods.push_back(Method::kMonteCarlo);
    if (config.budget_terms % 2 == 0) config.methods.push_back(Method::kAntithetic);
    if (!ctx.data) config.methods.push_back(Method::kOwen);
    config.methods.push_back(Method::kDu);
    config.methods.push_back(Method::kDuPlusPlus);
  } else {
    for (const auto& m : o.methods) config.methods.push_back(ParseMethod(m));
  }
  config.Validate();
  const ComparisonGame game = BuildGame(o, ctx, spec);

  computing = true;
  const MseTable table = RunComparison(config, game);
  if (ResolveFormat(o, "csv") == "json") {
    Json j;
    j["manifest"] = manifest;
    j["sizes"] = spec.sizes();
    j["exact"] = table.exact;
    j["rows"] = Json::array();
    for (const auto& r : table.rows) {
      j["rows"].push_back({{"experiment", "compare"},
                           {"method", MethodName(r.method)},
                           {"I", o.num_players},
                           {"budget", r.budget},
                           {"repetition", r.repetition},
                           {"mse", r.mse}});
    }
    j["summaries"] = Json::array();
    for (const auto& s : table.summaries) {
      j["summaries"].push_back({{"method", MethodName(s.method)},
                                {"budget", s.budget},
                                {"mean", s.mean},
                                {"min", s.min},
                                {"max", s.max}});
    }
    return j.dump(2) + "\n";
  }
  std::string out = CsvManifest(manifest) + "experiment,method,I,budget,repetition,mse\n";
  for (const auto& r : table.rows) {
    out += "compare," + std::string(MethodName(r.method)) + "," +
           std::to_string(o.num_players) + "," + std::to_string(r.budget) + "," +
           std::to_string(r.repetition) + "," + FormatDouble(r.mse) + "\n";
  }
  return out;
}

std::string RunConverge(const Options& o, const Json& manifest, bool& computing) {
  const SizeDistribution dist =
      SizeDistribution::Parse(o.sizes_dist.empty() ? "uniform:1:100" : o.sizes_dist);
  std::vector<ConvergenceResult> results;
  std::vector<GameSpec> specs;
  for (int I : o.converge_players) {
    specs.push_back(dist.Draw(I, DeriveSeed(o.seed, {kTagSizes, static_cast<uint64_t>(I)})));
  }
  computing = true;
  for (std::size_t k = 0; k < specs.size(); ++k) {
    results.push_back(ConvergenceExperiment(
        specs[k], o.samples,
        DeriveSeed(o.seed, {kTagConvergence, static_cast<uint64_t>(o.converge_players[k])})));
  }
  if (ResolveFormat(o, "csv") == "json") {
    Json j;
    j["manifest"] = manifest;
    j["results"] = Json::array();
    for (const auto& r : results) {
      j["results"].push_back({{"I", r.num_players},
                              {"ks", r.ks},
                              {"samples", r.samples},
                              {"histogram", r.histogram}});
    }
    return j.dump(2) + "\n";
  }
  std::string out = CsvManifest(manifest) + "I,ks,samples\n";
  for (const auto& r : results) {
    out += std::to_string(r.num_players) + "," + FormatDouble(r.ks) + "," +
           std::to_string(r.samples) + "\n";
  }
  return out;
}

std::string RunBounds(const Options& o, const Json& manifest, bool& computing) {
  BoundsExperimentConfig config;
  config.grid = o.grid;
  config.n_max = o.nmax;
  config.draws = o.draws;
  config.delta = o.delta;
  config.seed = o.seed;
  config.rho_grid_points = o.rho_points;
  if (!(o.delta > 0.0 && o.delta < 1.0)) {
    throw std::invalid_argument("--delta must lie in (0, 1)");
  }
  computing = true;
  const auto rows = BoundsExperiment(config, o.per_draw);
  if (ResolveFormat(o, "csv") == "json") {
    Json j;
    j["manifest"] = manifest;
    j["rows"] = Json::array();
    for (const auto& r : rows) {
      Json row = {{"I", r.num_players}};
      if (o.per_draw) row["draw"] = r.draw;
      row["du_bound_mean"] = r.du_bound_mean;
      row["mc_error"] = r.mc_error;
      j["rows"].push_back(row);
    }
    return j.dump(2) + "\n";
  }
  std::string out = CsvManifest(manifest) +
                    (o.per_draw ? "I,draw,du_bound_mean,mc_error\n"
                                : "I,du_bound_mean,mc_error\n");
  for (const auto& r : rows) {
    out += std::to_string(r.num_players) + ",";
    if (o.per_draw) out += std::to_string(r.draw) + ",";
    out += FormatDouble(r.du_bound_mean) + "," + FormatDouble(r.mc_error) + "\n";
  }
  return out;
}

std::string RunOracle(const Options& o, const Json& manifest, bool& computing) {
  const auto params = RegressionGameParams::Make(o.d, o.sigma);
  params.Validate();
  const Eigen::MatrixXd sigma = ParseSigmaSpec(o.sigma_spec, o.d);
  const Eigen::VectorXd theta = ParseThetaSpec(o.theta, o.d);
  for (int64_t n : o.oracle_n) {
    if (n < o.d + 2) {
      throw std::invalid_argument("every --n must be >= d + 2");
    }
  }
  const CardinalUtility closed = ClosedFormUtility(params);
  computing = true;
  struct Row {
    int64_t n;
    double closed, empirical;
  };
  std::vector<Row> rows;
  for (int64_t n : o.oracle_n) {
    const OracleOptions options{o.mc_reps, o.test_samples,
                                DeriveSeed(o.seed, {kTagOracle, static_cast<uint64_t>(n)})};
    rows.push_back({n, closed(static_cast<double>(n)),
                    EmpiricalUtilityOracle(params, sigma, theta, n, options)});
  }
  auto rel = [](const Row& r) { return std::abs(r.empirical - r.closed) / std::abs(r.closed); };
  if (ResolveFormat(o, "csv") == "json") {
    Json j;
    j["manifest"] = manifest;
    j["rows"] = Json::array();
    for (const auto& r : rows) {
      j["rows"].push_back({{"d", o.d},
                           {"n", r.n},
                           {"closed_form", r.closed},
                           {"empirical", r.empirical},
                           {"rel_diff", rel(r)}});
    }
    return j.dump(2) + "\n";
  }
  std::string out = CsvManifest(manifest) + "d,n,closed_form,empirical,rel_diff\n";
  for (const auto& r : rows) {
    out += std::to_string(o.d) + "," + std::to_string(r.n) + "," +
           FormatDouble(r.closed) + "," + FormatDouble(r.empirical) + "," +
           FormatDouble(rel(r)) + "\n";
  }
  return out;
}

void AddCommonOptions(CLI::App* app, Options& o) {
  app->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  app->add_option("--format", o.format, "Output format: auto, csv or json")
      ->check(CLI::IsMember({"auto", "csv", "json"}))
      ->capture_default_str();
  app->add_option("--out", o.out, "Write output to this file instead of stdout");
  app->add_option("--threads", o.threads, "Worker thread cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--config", o.config,
                  "key = value file; command-line flags take precedence");
}

void AddGameOptions(CLI::App* app, Options& o) {
  app->add_option("--sizes", o.sizes, "Dataset sizes, e.g. 1,2,4");
  app->add_option("--sizes-file", o.sizes_file, "File with one size per line");
  app->add_option("--game", o.game,
                  "sqrt | square | linear | regression:d=D,sigma=S[,mode=closed|empirical]"
                  " | fig2[:nmax=N]")
      ->capture_default_str();
  app->add_option("--data", o.data, "CSV file for an empirical game");
  app->add_option("--label", o.label, "Label column of --data")->capture_default_str();
  app->add_option("--task", o.task, "clf or reg")
      ->check(CLI::IsMember({"clf", "reg"}))
      ->capture_default_str();
  app->add_option("--players", o.players, "Equal split of --data across this many players")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app->add_option("--holdout", o.holdout, "Hold-out fraction of --data")
      ->capture_default_str();
  app->add_option("--steps", o.steps, "SGD steps per model")->capture_default_str();
  app->add_option("--lr", o.lr, "SGD learning rate")->capture_default_str();
  app->add_option("--batch", o.batch, "SGD minibatch size")->capture_default_str();
  app->add_option("--proxy-draws", o.proxy_draws,
                  "Draws averaged per proxy evaluation (DU on --data)")
      ->capture_default_str();
}

// Appends `--key value` for config entries not already given on the command
// line. Flags take "true" or "false".
void MergeConfig(std::vector<std::string>& args) {
  std::string path;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config" && k + 1 < args.size()) path = args[k + 1];
    if (args[k].rfind("--config=", 0) == 0) path = args[k].substr(9);
  }
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = line.substr(0, line.find('#'));
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos) {
      throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                  ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.rfind("--", 0) != 0) key = "--" + key;
    const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == key || a.rfind(key + "=", 0) == 0;
    });
    if (given || value == "false") continue;
    args.push_back(key);
    if (value != "true") args.push_back(value);
  }
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  Options o;
  CLI::App app("Shapley-value data valuation: exact values, estimators, bounds "
               "and benchmarks.",
               "dsval");
  app.require_subcommand(1);
  app.set_version_flag("--version", DSVAL_VERSION);

  CLI::App* exact = app.add_subcommand("exact", "Exact Shapley values");
  AddCommonOptions(exact, o);
  AddGameOptions(exact, o);
  exact->add_option("--form", o.form, "subsets or permutations")
      ->check(CLI::IsMember({"subsets", "permutations"}))
      ->capture_default_str();

  CLI::App* estimate = app.add_subcommand("estimate", "Approximate Shapley values");
  AddCommonOptions(estimate, o);
  AddGameOptions(estimate, o);
  estimate->add_option("--method", o.method, "exact, mc, mc-anti, owen, du or dupp")
      ->capture_default_str();
  estimate->add_option("--budget", o.budget, "Terms per player, 0 for I")->capture_default_str();

  CLI::App* bench = app.add_subcommand("bench", "Benchmarks");
  bench->require_subcommand(1);
  CLI::App* compare = bench->add_subcommand(
      "compare", "Estimator MSE against the exact values over repetition blocks");
  AddCommonOptions(compare, o);
  AddGameOptions(compare, o);
  compare->add_option("--I", o.num_players, "Number of players")->capture_default_str();
  compare->add_option("--sizes-dist", o.sizes_dist,
                      "uniform:lo:hi, pow2 or explicit:a,b,... (default uniform:10:1000)");
  compare->add_option("--methods", o.methods, "Comma-separated methods")->delimiter(',');
  compare->add_option("--budget", o.budget, "Terms per player, 0 for I")->capture_default_str();
  compare->add_option("--estimations", o.estimations, "Estimations per MSE")
      ->capture_default_str();
  compare->add_option("--repetitions", o.repetitions, "MSE repetition blocks")
      ->capture_default_str();

  CLI::App* converge = app.add_subcommand(
      "converge", "Distribution of normalized random coalition sizes");
  AddCommonOptions(converge, o);
  converge->add_option("--I", o.converge_players, "Comma-separated player counts")
      ->delimiter(',')
      ->capture_default_str();
  converge->add_option("--sizes-dist", o.sizes_dist,
                       "uniform:lo:hi, pow2 or explicit:a,b,... (default uniform:1:100)");
  converge->add_option("--samples", o.samples, "Samples per I")->capture_default_str();

  CLI::App* bounds = app.add_subcommand(
      "bounds", "DU bias bound versus Monte Carlo error at budget I");
  AddCommonOptions(bounds, o);
  bounds->add_option("--I-grid", o.grid, "Comma-separated player counts")
      ->delimiter(',')
      ->capture_default_str();
  bounds->add_option("--nmax", o.nmax, "Sizes drawn from 1..nmax")->capture_default_str();
  bounds->add_option("--draws", o.draws, "Size draws per I")->capture_default_str();
  bounds->add_option("--delta", o.delta, "Failure probability")->capture_default_str();
  bounds->add_option("--rho-points", o.rho_points, "Grid points for the rho estimate")
      ->capture_default_str();
  bounds->add_flag("--per-draw", o.per_draw, "Emit one row per draw");

  CLI::App* oracle = app.add_subcommand(
      "oracle", "Closed-form regression utility next to its Monte Carlo estimate");
  AddCommonOptions(oracle, o);
  oracle->add_option("--d", o.d, "Feature dimension")->capture_default_str();
  oracle->add_option("--sigma", o.sigma, "Noise standard deviation")->capture_default_str();
  oracle->add_option("--n", o.oracle_n, "Comma-separated sample sizes")
      ->delimiter(',')
      ->capture_default_str();
  oracle->add_option("--mc-reps", o.mc_reps, "Monte Carlo repetitions")
      ->capture_default_str();
  oracle->add_option("--test-samples", o.test_samples, "Test points per repetition")
      ->capture_default_str();
  oracle->add_option("--sigma-spec", o.sigma_spec, "identity or a matrix file")
      ->capture_default_str();
  oracle->add_option("--theta", o.theta, "ones, standard-normal:SEED or a file")
      ->capture_default_str();
  // The empirical regression game reads --test-samples as well.
  for (CLI::App* sub : {exact, estimate, compare}) {
    sub->add_option("--test-samples", o.test_samples,
                    "Test points for regression:mode=empirical")
        ->capture_default_str();
  }

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    MergeConfig(args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  struct Command {
    CLI::App* app;
    std::string name;
    std::string (*run)(const Options&, const Json&, bool&);
  };
  const Command commands[] = {
      {exact, "exact", RunExact},         {estimate, "estimate", RunEstimate},
      {compare, "bench compare", RunCompare}, {converge, "converge", RunConverge},
      {bounds, "bounds", RunBounds},      {oracle, "oracle", RunOracle},
  };
  const Command* chosen = nullptr;
  for (const auto& c : commands) {
    if (c.app->parsed()) chosen = &c;
  }
  if (chosen == nullptr) {
    err << app.help();
    return kExitUsage;
  }

  if (!o.out.empty()) {
    const auto parent = std::filesystem::absolute(o.out).parent_path();
    if (!std::filesystem::is_directory(parent)) {
      err << "error: directory of --out does not exist: " << parent.string() << "\n";
      return kExitUsage;
    }
  }
  SetMaxThreads(o.threads);

  bool computing = false;
  std::string text;
  try {
    text = chosen->run(o, Manifest(*chosen->app, chosen->name), computing);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return computing ? kExitComputation : kExitUsage;
  }

  if (o.out.empty()) {
    out << text;
  } else {
    std::ofstream file(o.out, std::ios::binary);
    file << text;
    if (!file) {
      err << "error: cannot write " << o.out << "\n";
      return kExitComputation;
    }
  }
  return kExitOk;
}

}  // namespace dsval
