// Copyright 2026 The lbrank Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <algorithm>
#include <charconv>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lbrank/dataset.h"
#include "lbrank/divergence.h"
#include "lbrank/errors.h"
#include "lbrank/fusion.h"
#include "lbrank/io.h"
#include "lbrank/linear.h"
#include "lbrank/metrics.h"
#include "lbrank/model_io.h"
#include "lbrank/nested.h"
#include "lbrank/scaling.h"
#include "lbrank/synth.h"

namespace lbrank::cli {
namespace {

using json = nlohmann::ordered_json;

// Writes to `path`, or to `out` when path is empty.
void Emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    WriteFileAtomic(path, text);
  }
}

std::vector<double> ParseDoubleList(std::string_view text, std::string_view what) {
  std::vector<double> values;
  while (!text.empty()) {
    const std::size_t comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
      throw ValidationError(std::string(what) + ": cannot parse '" +
                            std::string(item) + "'");
    }
    values.push_back(v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return values;
}

// --- generate -------------------------------------------------------------

struct GenerateFlags {
  std::size_t n = 50;
  std::size_t k = 8;
  std::size_t queries = 100;
  std::uint64_t seed = 0;
  std::string profile = "hetero";
  bool softmax = false;
  double temperature = 0.1;
  std::string name = "synthetic";
  std::string out;
};

void AddGenerate(CLI::App& app, GenerateFlags& f) {
  app.add_option("--n", f.n, "Candidates per query")->check(CLI::Range(2, 1 << 30));
  app.add_option("--k", f.k, "Score lists (scorers) per query")->check(CLI::PositiveNumber);
  app.add_option("--queries", f.queries, "Number of queries")->check(CLI::PositiveNumber);
  app.add_option("--seed", f.seed, "Random seed");
  app.add_option("--profile", f.profile,
                 "Scorer profiles: clean, uniform:<sigma>, hetero, one-perfect, "
                 "list:<sigma>/<bias>/<corruption>,...");
  app.add_flag("--softmax", f.softmax, "Emit softmax-normalized lists");
  app.add_option("--temperature", f.temperature, "Softmax temperature")
      ->check(CLI::PositiveNumber);
  app.add_option("--name", f.name, "Dataset name");
  app.add_option("--out", f.out, "Output JSON Lines file")->required();
}

int RunGenerate(const GenerateFlags& f, std::ostream& out) {
  GeneratorParams params;
  params.num_candidates = f.n;
  params.num_lists = f.k;
  params.num_queries = f.queries;
  params.seed = f.seed;
  params.profiles = ParseProfiles(f.profile, f.k);
  params.profile_spec = f.profile;
  params.softmax = f.softmax;
  params.softmax_temperature = f.temperature;
  params.name = f.name;
  const Dataset data = GenerateSynthetic(params);
  SaveDataset(data, f.out);
  json summary;
  summary["N"] = f.n;
  summary["K"] = f.k;
  summary["queries"] = f.queries;
  summary["path"] = f.out;
  out << summary.dump() << "\n";
  return kExitOk;
}

// --- train ----------------------------------------------------------------

struct TrainFlags {
  std::string data;
  std::string model = "linear";
  std::string g = "sqrt";
  double lambda = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double mu = 0.1;
  int epochs = 100;
  double tol = 1e-8;
  std::string batch = "per-query";
  std::size_t k2 = 3;
  std::string phi1 = "log1p";
  std::string phi2 = "log1p";
  std::string gradient_mode = "analytic";
  std::string sense = "paper_descent";
  std::uint64_t seed = 0;
  std::string out;
};

void AddTrain(CLI::App& app, TrainFlags& f) {
  app.add_option("--data", f.data, "Training dataset (JSON Lines)")->required();
  app.add_option("--model", f.model, "Model kind")
      ->check(CLI::IsMember({"linear", "nested"}));
  app.add_option("--g", f.g, "Concave function: sqrt, log1p, power:<a>, linear");
  app.add_option("--lambda", f.lambda, "Linear L2 regularization")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--lambda1", f.lambda1, "Nested bottom-layer regularization")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--lambda2", f.lambda2, "Nested top-layer regularization")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--mu", f.mu, "Learning rate")->check(CLI::PositiveNumber);
  app.add_option("--epochs", f.epochs, "Maximum epochs")->check(CLI::PositiveNumber);
  app.add_option("--tol", f.tol, "Stop when max |dw| over an epoch falls below this")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--batch", f.batch, "Update granularity")
      ->check(CLI::IsMember({"per-query", "full"}));
  app.add_option("--k2", f.k2, "Nested hidden width")->check(CLI::PositiveNumber);
  app.add_option("--phi1", f.phi1, "Nested bottom activation")
      ->check(CLI::IsMember({"log1p", "sqrt1p", "identity"}));
  app.add_option("--phi2", f.phi2, "Nested top activation")
      ->check(CLI::IsMember({"log1p", "sqrt1p", "identity"}));
  app.add_option("--gradient-mode", f.gradient_mode, "Nested gradient")
      ->check(CLI::IsMember({"analytic", "paper-literal"}));
  app.add_option("--sense", f.sense, "Nested update direction")
      ->check(CLI::IsMember({"paper_descent", "ascent"}));
  app.add_option("--seed", f.seed, "Shuffle seed");
  app.add_option("--out", f.out, "Output model file")->required();
}

int RunTrain(const TrainFlags& f, std::ostream& out, std::ostream& err) {
  const ConcaveFunction g = ConcaveFunction::Parse(f.g);
  const Dataset data = LoadDataset(f.data);
  TrainHooks hooks;
  hooks.on_epoch = [&](int epoch, double objective) {
    err << "epoch " << epoch << " objective " << objective << "\n";
  };
  hooks.on_warning = [&](const std::string& message) { err << "warning: " << message << "\n"; };

  json summary;
  if (f.model == "linear") {
    TrainConfig cfg;
    cfg.lambda = f.lambda;
    cfg.mu = f.mu;
    cfg.epochs = f.epochs;
    cfg.tol = f.tol;
    cfg.batch = ParseBatchMode(f.batch);
    cfg.seed = f.seed;
    const LinearModel model = TrainLinear(data.records, g, cfg, hooks);
    SaveModel(model, f.out);
    summary["final_objective"] = model.meta.final_objective;
    summary["epochs_run"] = model.meta.epochs_run;
  } else {
    NestedConfig cfg;
    cfg.lambda1 = f.lambda1;
    cfg.lambda2 = f.lambda2;
    cfg.mu = f.mu;
    cfg.epochs = f.epochs;
    cfg.tol = f.tol;
    cfg.batch = ParseBatchMode(f.batch);
    cfg.seed = f.seed;
    cfg.hidden = f.k2;
    cfg.phi1 = ParseActivation(f.phi1);
    cfg.phi2 = ParseActivation(f.phi2);
    cfg.gradient_mode = ParseGradientMode(f.gradient_mode);
    cfg.sense = ParseObjectiveSense(f.sense);
    const NestedModel model = TrainNested(data.records, g, cfg, hooks);
    SaveModel(model, f.out);
    summary["final_objective"] = model.meta.final_objective;
    summary["epochs_run"] = model.meta.epochs_run;
  }
  summary["model"] = f.model;
  summary["path"] = f.out;
  out << summary.dump() << "\n";
  return kExitOk;
}

// --- aggregate ------------------------------------------------------------

struct AggregateFlags {
  std::string model;
  std::string data;
  std::string out;
};

void AddAggregate(CLI::App& app, AggregateFlags& f) {
  app.add_option("--model", f.model, "Trained model file")->required();
  app.add_option("--data", f.data, "Dataset to aggregate")->required();
  app.add_option("--out", f.out, "Predictions file (JSON Lines); stdout if omitted");
}

int RunAggregate(const AggregateFlags& f, std::ostream& out) {
  const AnyModel model = LoadModel(f.model);
  const Dataset data = LoadDataset(f.data);
  if (ModelInputs(model) != data.meta.num_lists) {
    throw ValidationError("model expects K = " + std::to_string(ModelInputs(model)) +
                          " but the dataset has K = " +
                          std::to_string(data.meta.num_lists));
  }
  std::string text;
  for (const QueryRecord& r : data.records) {
    const Aggregate a = InferModel(model, r.lists);
    json line;
    line["id"] = r.id;
    line["ranking"] = std::vector<std::size_t>(a.ranking.order().begin(), a.ranking.order().end());
    line["sorted_scores"] = a.sorted_scores;
    text += line.dump();
    text += '\n';
  }
  Emit(f.out, text, out);
  return kExitOk;
}

// --- evaluate -------------------------------------------------------------

struct EvaluateFlags {
  std::string pred;
  std::string data;
  std::string discount = "log2";
  std::string g = "sqrt";
  std::string out;
};

void AddEvaluate(CLI::App& app, EvaluateFlags& f) {
  app.add_option("--pred", f.pred, "Predictions from `aggregate`")->required();
  app.add_option("--data", f.data, "Dataset with ground truth")->required();
  app.add_option("--discount", f.discount, "log2 or custom:<d1>,<d2>,...");
  app.add_option("--g", f.g, "Concave function for the bound check");
  app.add_option("--out", f.out, "Report file (JSON); stdout if omitted");
}

std::map<std::string, Aggregate> LoadPredictions(const std::string& path) {
  const std::string text = ReadFile(path);
  std::map<std::string, Aggregate> preds;
  std::istringstream lines(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      Aggregate a;
      const std::string id = j.at("id").get<std::string>();
      a.ranking = Ranking(j.at("ranking").get<std::vector<std::size_t>>());
      a.sorted_scores = j.at("sorted_scores").get<std::vector<double>>();
      if (a.sorted_scores.size() != a.ranking.size()) {
        throw ParseError("ranking and sorted_scores differ in length", line_no);
      }
      a.scores.resize(a.ranking.size());
      for (std::size_t p = 0; p < a.ranking.size(); ++p) {
        a.scores[a.ranking[p]] = a.sorted_scores[p];
      }
      if (!preds.emplace(id, std::move(a)).second) {
        throw ParseError("duplicate prediction id '" + id + "'", line_no);
      }
    } catch (const json::exception& e) {
      throw ParseError(std::string("malformed prediction: ") + e.what(), line_no);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return preds;
}

int RunEvaluate(const EvaluateFlags& f, std::ostream& out) {
  const Dataset data = LoadDataset(f.data);
  const std::map<std::string, Aggregate> preds = LoadPredictions(f.pred);
  const std::size_t n = data.meta.num_candidates;

  std::vector<Aggregate> fused;
  fused.reserve(data.records.size());
  std::set<std::string> used;
  for (const QueryRecord& r : data.records) {
    auto it = preds.find(r.id);
    if (it == preds.end()) {
      throw ValidationError("no prediction for dataset id '" + r.id + "'");
    }
    if (it->second.ranking.size() != n) {
      throw ValidationError("prediction '" + r.id + "' ranks " +
                            std::to_string(it->second.ranking.size()) +
                            " candidates, dataset has N = " + std::to_string(n));
    }
    fused.push_back(it->second);
    used.insert(r.id);
  }
  for (const auto& [id, unused] : preds) {
    if (!used.count(id)) {
      throw ValidationError("prediction id '" + id + "' is not in the dataset");
    }
  }

  DiscountSpec discount;
  if (f.discount == "log2") {
    discount = DiscountSpec::Log2(n);
  } else if (f.discount.starts_with("custom:")) {
    discount = DiscountSpec(ParseDoubleList(std::string_view(f.discount).substr(7), "--discount"));
    if (discount.size() != n) {
      throw ValidationError("--discount has " + std::to_string(discount.size()) +
                            " values for N = " + std::to_string(n));
    }
  } else {
    throw ValidationError("--discount must be log2 or custom:<values>");
  }

  double ndcg_sum = 0.0, top1 = 0.0;
  const ConcaveSpec g(ConcaveFunction::Parse(f.g), n);
  std::size_t bound_ok = 0, bound_checked = 0, bound_undefined = 0;
  for (std::size_t q = 0; q < data.records.size(); ++q) {
    const QueryRecord& r = data.records[q];
    ndcg_sum += Ndcg(fused[q].ranking, r.truth, r.EffectiveGrades(), discount);
    top1 += Top1Error(fused[q].ranking, r.truth);
    try {
      const BoundReport b = RankLossBound(ScoreList(fused[q].scores), r.truth, g);
      ++bound_checked;
      if (b.loss <= b.bound_n_as_N + 1e-9) ++bound_ok;
    } catch (const ValidationError&) {
      ++bound_undefined;
    }
  }
  const double count = static_cast<double>(data.records.size());
  json report;
  report["queries"] = data.records.size();
  report["discount"] = f.discount;
  if (f.discount == "log2") {
    // Same computation path as the fusion report.
    const SplitMetrics m = EvaluateAggregates(data.records, fused);
    report["mean_ndcg"] = m.mean_ndcg;
    report["mean_ndcg_loss"] = m.mean_ndcg_loss;
    report["top1_error"] = m.top1_error;
  } else {
    report["mean_ndcg"] = ndcg_sum / count;
    report["mean_ndcg_loss"] = 1.0 - ndcg_sum / count;
    report["top1_error"] = top1 / count;
  }
  report["bound"] = {{"g_spec", f.g},
                     {"checked", bound_checked},
                     {"satisfied", bound_ok},
                     {"undefined", bound_undefined}};
  Emit(f.out, report.dump(2) + "\n", out);
  return kExitOk;
}

// --- experiment -------------------------------------------------------------

struct ExperimentFlags {
  std::string data;
  std::string methods = "averaging,accuracy_weighted,linear_lbd,nested_lbd";
  double train_fraction = 0.8;
  std::string g = "sqrt";
  double mu = 0.1;
  int epochs = 100;
  double lambda = 0.0;
  std::size_t k2 = 3;
  std::uint64_t seed = 0;
  std::string out;
};

void AddExperiment(CLI::App& app, ExperimentFlags& f) {
  app.add_option("--data", f.data, "Dataset (JSON Lines)")->required();
  app.add_option("--methods", f.methods, "Comma-separated fusion methods");
  app.add_option("--train-fraction", f.train_fraction, "Leading fraction used for training")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--g", f.g, "Concave function");
  app.add_option("--mu", f.mu, "Learning rate")->check(CLI::PositiveNumber);
  app.add_option("--epochs", f.epochs, "Maximum epochs")->check(CLI::PositiveNumber);
  app.add_option("--lambda", f.lambda, "Regularization for both LBD models")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--k2", f.k2, "Nested hidden width")->check(CLI::PositiveNumber);
  app.add_option("--seed", f.seed, "Shuffle seed");
  app.add_option("--out", f.out, "Report file (JSON); stdout if omitted");
}

int RunExperiment(const ExperimentFlags& f, std::ostream& out) {
  const Dataset data = LoadDataset(f.data);
  FusionConfig cfg;
  cfg.methods.clear();
  std::string_view rest = f.methods;
  while (!rest.empty()) {
    const std::size_t comma = rest.find(',');
    cfg.methods.push_back(ParseFusionMethod(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  cfg.train_fraction = f.train_fraction;
  cfg.g = ConcaveFunction::Parse(f.g);
  cfg.linear.mu = cfg.nested.mu = f.mu;
  cfg.linear.epochs = cfg.nested.epochs = f.epochs;
  cfg.linear.seed = cfg.nested.seed = f.seed;
  cfg.linear.lambda = cfg.nested.lambda1 = f.lambda;
  cfg.nested.hidden = f.k2;
  Emit(f.out, RunFusionExperiment(data, cfg).ToJson(), out);
  return kExitOk;
}

// --- bench ------------------------------------------------------------------

struct BenchFlags {
  std::string n_grid = "100,1000,10000";
  std::size_t k = 8;
  std::size_t k2 = 120;
  std::size_t k2_base = 3;
  std::size_t queries = 40;
  std::size_t nested_queries = 20000;
  int repeats = 3;
  std::uint64_t seed = 1;
  std::string out;
};

void AddBench(CLI::App& app, BenchFlags& f) {
  app.add_option("--n-grid", f.n_grid, "Comma-separated candidate counts");
  app.add_option("--k", f.k, "Score lists per query")->check(CLI::PositiveNumber);
  app.add_option("--k2", f.k2, "Nested hidden width to time")->check(CLI::PositiveNumber);
  app.add_option("--k2-base", f.k2_base, "Baseline hidden width")->check(CLI::PositiveNumber);
  app.add_option("--queries", f.queries, "Queries per linear epoch")->check(CLI::PositiveNumber);
  app.add_option("--nested-queries", f.nested_queries, "Queries per nested epoch")
      ->check(CLI::PositiveNumber);
  app.add_option("--repeats", f.repeats, "Timing repeats (best of)")->check(CLI::PositiveNumber);
  app.add_option("--seed", f.seed, "Data seed");
  app.add_option("--out", f.out, "Report file (JSON); stdout if omitted");
}

int RunBench(const BenchFlags& f, std::ostream& out) {
  BenchConfig cfg;
  cfg.n_grid.clear();
  for (double v : ParseDoubleList(f.n_grid, "--n-grid")) {
    if (!(v >= 2.0) || v != static_cast<double>(static_cast<std::size_t>(v))) {
      throw ValidationError("--n-grid entries must be integers >= 2");
    }
    cfg.n_grid.push_back(static_cast<std::size_t>(v));
  }
  cfg.k = f.k;
  cfg.k2 = f.k2;
  cfg.k2_base = f.k2_base;
  cfg.queries = f.queries;
  cfg.nested_queries = f.nested_queries;
  cfg.repeats = f.repeats;
  cfg.seed = f.seed;
  Emit(f.out, RunScalingBench(cfg).ToJson(), out);
  return kExitOk;
}

// Replaces `--config FILE` after a subcommand by the file's values as
// `--key=value` flags placed ahead of the command-line flags.
std::vector<std::string> ExpandConfig(const std::vector<std::string>& args) {
  if (args.empty() || args[0].starts_with("-")) return args;
  const std::string& sub = args[0];
  std::vector<std::string> rest;
  std::string path;
  bool found = false;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
      found = true;
    } else if (args[i].starts_with("--config=")) {
      path = args[i].substr(9);
      found = true;
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!found) return args;

  std::vector<std::string> expanded = {sub};
  for (const CLI::ConfigItem& item : CLI::ConfigTOML().from_file(path)) {
    if (item.name == "++" || item.name == "--") continue;
    if (!item.parents.empty() && !(item.parents.size() == 1 && item.parents[0] == sub)) {
      continue;
    }
    std::string key = item.name;
    std::replace(key.begin(), key.end(), '_', '-');
    std::string value;
    for (std::size_t i = 0; i < item.inputs.size(); ++i) {
      value += (i ? "," : "") + item.inputs[i];
    }
    expanded.push_back("--" + key + "=" + value);
  }
  expanded.insert(expanded.end(), rest.begin(), rest.end());
  return expanded;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"lbrank: Lovasz-Bregman rank aggregation toolkit", "lbrank"};
  app.require_subcommand(1);

  GenerateFlags generate;
  TrainFlags train;
  AggregateFlags aggregate;
  EvaluateFlags evaluate;
  ExperimentFlags experiment;
  BenchFlags bench;
  CLI::App* generate_cmd = app.add_subcommand("generate", "Write a synthetic dataset");
  CLI::App* train_cmd = app.add_subcommand("train", "Train a linear or nested model");
  CLI::App* aggregate_cmd = app.add_subcommand("aggregate", "Fuse score lists with a model");
  CLI::App* evaluate_cmd = app.add_subcommand("evaluate", "Score predictions against truth");
  CLI::App* experiment_cmd =
      app.add_subcommand("experiment", "Compare fusion methods on a train/test split");
  CLI::App* bench_cmd = app.add_subcommand("bench", "Time training epochs against N, K, K2");
  AddGenerate(*generate_cmd, generate);
  AddTrain(*train_cmd, train);
  AddAggregate(*aggregate_cmd, aggregate);
  AddEvaluate(*evaluate_cmd, evaluate);
  AddExperiment(*experiment_cmd, experiment);
  AddBench(*bench_cmd, bench);
  std::string config_path;
  for (CLI::App* sub : app.get_subcommands({})) {
    sub->add_option("--config", config_path,
                    "TOML/INI file of flag values (keys without dashes, optionally "
                    "under a [subcommand] section); command-line flags win");
    for (CLI::Option* opt : sub->get_options()) {
      opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    }
  }

  try {
    std::vector<std::string> expanded = ExpandConfig(args);
    std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::FileError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return kExitUsage;
  }

  try {
    if (generate_cmd->parsed()) return RunGenerate(generate, out);
    if (train_cmd->parsed()) return RunTrain(train, out, err);
    if (aggregate_cmd->parsed()) return RunAggregate(aggregate, out);
    if (evaluate_cmd->parsed()) return RunEvaluate(evaluate, out);
    if (experiment_cmd->parsed()) return RunExperiment(experiment, out);
    if (bench_cmd->parsed()) return RunBench(bench, out);
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace lbrank::cli
