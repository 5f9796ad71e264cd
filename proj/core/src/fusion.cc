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


#include "lbrank/fusion.h"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "json.hpp"
#include "lbrank/errors.h"

namespace lbrank {

using json = nlohmann::ordered_json;

std::string_view ToString(FusionMethod m) {
  switch (m) {
    case FusionMethod::kAveraging:
      return "averaging";
    case FusionMethod::kAccuracyWeighted:
      return "accuracy_weighted";
    case FusionMethod::kLinearLbd:
      return "linear_lbd";
    case FusionMethod::kNestedLbd:
      return "nested_lbd";
  }
  return "averaging";
}

FusionMethod ParseFusionMethod(std::string_view text) {
  for (FusionMethod m : {FusionMethod::kAveraging, FusionMethod::kAccuracyWeighted,
                         FusionMethod::kLinearLbd, FusionMethod::kNestedLbd}) {
    if (text == ToString(m)) return m;
  }
  throw ValidationError("unknown fusion method '" + std::string(text) + "'");
}

SplitMetrics EvaluateAggregates(std::span<const QueryRecord> records,
                                std::span<const Aggregate> fused) {
  if (records.size() != fused.size()) {
    throw ValidationError("one aggregate per record expected");
  }
  SplitMetrics m;
  m.queries = records.size();
  if (records.empty()) return m;
  const DiscountSpec discount = DiscountSpec::Log2(records.front().num_candidates());
  for (std::size_t q = 0; q < records.size(); ++q) {
    const QueryRecord& r = records[q];
    const double ndcg = Ndcg(fused[q].ranking, r.truth, r.EffectiveGrades(), discount);
    m.mean_ndcg += ndcg;
    m.mean_ndcg_loss += 1.0 - ndcg;
    m.top1_error += Top1Error(fused[q].ranking, r.truth);
  }
  const double count = static_cast<double>(records.size());
  m.mean_ndcg /= count;
  m.mean_ndcg_loss /= count;
  m.top1_error /= count;
  return m;
}

const MethodResult* FusionReport::Find(FusionMethod m) const {
  for (const MethodResult& r : methods) {
    if (r.method == m) return &r;
  }
  return nullptr;
}

namespace {

json MetricsJson(const SplitMetrics& m) {
  json j;
  j["queries"] = m.queries;
  j["top1_error"] = m.top1_error;
  j["mean_ndcg"] = m.mean_ndcg;
  j["mean_ndcg_loss"] = m.mean_ndcg_loss;
  return j;
}

json TrainConfigJson(const TrainConfig& c) {
  json j;
  j["lambda"] = c.lambda;
  j["mu"] = c.mu;
  j["epochs"] = c.epochs;
  j["batch"] = std::string(ToString(c.batch));
  j["seed"] = c.seed;
  j["tol"] = c.tol;
  return j;
}

json NestedConfigJson(const NestedConfig& c) {
  json j = TrainConfigJson(c);
  j.erase("lambda");
  j["K2"] = c.hidden;
  j["lambda1"] = c.lambda1;
  j["lambda2"] = c.lambda2;
  j["phi1"] = std::string(ToString(c.phi1));
  j["phi2"] = std::string(ToString(c.phi2));
  j["gradient_mode"] = std::string(ToString(c.gradient_mode));
  j["objective_sense"] = std::string(ToString(c.sense));
  return j;
}

std::vector<double> AccuracyWeights(std::span<const QueryRecord> train) {
  const std::size_t k = train.front().num_lists();
  std::vector<double> w(k, 0.0);
  for (const QueryRecord& r : train) {
    for (std::size_t i = 0; i < k; ++i) {
      if (RankFromScores(r.lists[i])[0] == r.truth[0]) w[i] += 1.0;
    }
  }
  double total = 0.0;
  for (double v : w) total += v;
  for (double& v : w) v = total > 0.0 ? v / total : 1.0 / static_cast<double>(k);
  return w;
}

template <typename Infer>
double ValidationLoss(std::span<const QueryRecord> val, Infer infer) {
  std::vector<Aggregate> fused;
  fused.reserve(val.size());
  for (const QueryRecord& r : val) fused.push_back(infer(r.lists));
  return EvaluateAggregates(val, fused).mean_ndcg_loss;
}

// Picks the grid value whose model, fit on the head of `train`, has the
// lowest NDCG loss on its tail. `fit_and_score(fit, val, value)` trains and
// returns that loss.
template <typename FitAndScore>
double SelectFromGrid(std::span<const QueryRecord> train, const FusionConfig& cfg,
                      double fallback, FitAndScore fit_and_score, json& trace) {
  if (cfg.lambda_grid.empty()) return fallback;
  const auto n_fit = static_cast<std::size_t>(
      std::floor((1.0 - cfg.validation_fraction) * static_cast<double>(train.size())));
  if (n_fit == 0 || n_fit >= train.size()) {
    throw ValidationError("training split too small for validation-based selection");
  }
  double best_value = cfg.lambda_grid.front();
  double best_loss = std::numeric_limits<double>::infinity();
  for (double value : cfg.lambda_grid) {
    const double loss = fit_and_score(train.first(n_fit), train.subspan(n_fit), value);
    trace.push_back({{"value", value}, {"validation_ndcg_loss", loss}});
    if (loss < best_loss) {
      best_loss = loss;
      best_value = value;
    }
  }
  return best_value;
}

template <typename Infer>
void Evaluate(std::span<const QueryRecord> train, std::span<const QueryRecord> test,
              Infer infer, MethodResult& result) {
  std::vector<Aggregate> fused;
  fused.reserve(train.size());
  for (const QueryRecord& r : train) fused.push_back(infer(r.lists));
  result.train = EvaluateAggregates(train, fused);
  fused.clear();
  for (const QueryRecord& r : test) fused.push_back(infer(r.lists));
  result.test = EvaluateAggregates(test, fused);
}

MethodResult RunMethod(FusionMethod method, std::span<const QueryRecord> train,
                       std::span<const QueryRecord> test, const FusionConfig& cfg) {
  MethodResult result;
  result.method = method;
  json config;
  config["g_spec"] = cfg.g.ToString();
  const auto start = std::chrono::steady_clock::now();
  try {
    switch (method) {
      case FusionMethod::kAveraging: {
        const std::size_t k = train.front().num_lists();
        const std::vector<double> w(k, 1.0 / static_cast<double>(k));
        config["weights"] = w;
        Evaluate(train, test, [&](const auto& lists) { return AggregateLinear(w, lists); },
                 result);
        break;
      }
      case FusionMethod::kAccuracyWeighted: {
        const std::vector<double> w = AccuracyWeights(train);
        config["weights"] = w;
        Evaluate(train, test, [&](const auto& lists) { return AggregateLinear(w, lists); },
                 result);
        break;
      }
      case FusionMethod::kLinearLbd: {
        TrainConfig tc = cfg.linear;
        json trace = json::array();
        tc.lambda = SelectFromGrid(
            train, cfg, tc.lambda,
            [&](auto fit, auto val, double lambda) {
              TrainConfig trial = tc;
              trial.lambda = lambda;
              const LinearModel m = TrainLinear(fit, cfg.g, trial);
              return ValidationLoss(val, [&](const auto& l) { return InferLinear(m, l); });
            },
            trace);
        config["train"] = TrainConfigJson(tc);
        if (!trace.empty()) config["lambda_selection"] = std::move(trace);
        const LinearModel model = TrainLinear(train, cfg.g, tc);
        config["weights"] = model.weights;
        config["epochs_run"] = model.meta.epochs_run;
        Evaluate(train, test, [&](const auto& lists) { return InferLinear(model, lists); },
                 result);
        break;
      }
      case FusionMethod::kNestedLbd: {
        NestedConfig nc = cfg.nested;
        json trace = json::array();
        nc.lambda1 = SelectFromGrid(
            train, cfg, nc.lambda1,
            [&](auto fit, auto val, double lambda1) {
              NestedConfig trial = nc;
              trial.lambda1 = lambda1;
              const NestedModel m = TrainNested(fit, cfg.g, trial);
              return ValidationLoss(val, [&](const auto& l) { return InferNested(m, l); });
            },
            trace);
        config["train"] = NestedConfigJson(nc);
        if (!trace.empty()) config["lambda1_selection"] = std::move(trace);
        const NestedModel model = TrainNested(train, cfg.g, nc);
        config["epochs_run"] = model.meta.epochs_run;
        Evaluate(train, test, [&](const auto& lists) { return InferNested(model, lists); },
                 result);
        break;
      }
    }
  } catch (const std::exception& e) {
    result.failure = e.what();
  }
  result.wall_time_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count();
  result.config = config.dump();
  return result;
}

}  // namespace

FusionReport RunFusionExperiment(const Dataset& data, const FusionConfig& cfg) {
  if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0)) {
    throw ValidationError("train fraction must lie in (0, 1)");
  }
  const auto n_train = static_cast<std::size_t>(
      std::floor(cfg.train_fraction * static_cast<double>(data.records.size())));
  if (n_train == 0 || n_train >= data.records.size()) {
    throw ValidationError("dataset with " + std::to_string(data.records.size()) +
                          " records is too small for the train/test split");
  }
  const std::span<const QueryRecord> all(data.records);
  const auto train = all.first(n_train);
  const auto test = all.subspan(n_train);

  FusionReport report;
  report.dataset_meta = data.meta;
  report.train_fraction = cfg.train_fraction;
  report.train_queries = train.size();
  report.test_queries = test.size();
  for (FusionMethod m : cfg.methods) report.methods.push_back(RunMethod(m, train, test, cfg));
  return report;
}

std::string FusionReport::ToJson() const {
  json j;
  json meta;
  meta["N"] = dataset_meta.num_candidates;
  meta["K"] = dataset_meta.num_lists;
  meta["name"] = dataset_meta.name;
  meta["seed"] = dataset_meta.seed;
  meta["generator_params"] = json::parse(dataset_meta.generator_params);
  j["dataset_meta"] = std::move(meta);
  j["split"] = {{"train_fraction", train_fraction},
                {"train_queries", train_queries},
                {"test_queries", test_queries}};
  json per_method = json::object();
  for (const MethodResult& r : methods) {
    json m;
    m["config"] = json::parse(r.config);
    if (r.ok()) {
      m["train_metrics"] = MetricsJson(r.train);
      m["test_metrics"] = MetricsJson(r.test);
    } else {
      m["failure"] = r.failure;
    }
    m["wall_time_ms"] = r.wall_time_ms;
    per_method[std::string(ToString(r.method))] = std::move(m);
  }
  j["per_method"] = std::move(per_method);
  return j.dump(2) + "\n";
}

}  // namespace lbrank
