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


#include "lbrank/linear.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "lbrank/errors.h"

namespace lbrank {

void LinearModel::Validate(double tolerance) const {
  if (!OnSimplex(weights, tolerance)) {
    throw ValidationError("linear model weights are not on the simplex");
  }
}

namespace {

void CheckWeights(std::span<const double> w, const DivergenceTable& d) {
  if (w.size() != d.lists()) {
    throw ValidationError("model has " + std::to_string(w.size()) +
                          " weights but the data has K = " +
                          std::to_string(d.lists()));
  }
  if (d.queries() == 0) throw ValidationError("no query records");
}

}  // namespace

double LinearObjective(std::span<const double> w, const DivergenceTable& d,
                       double lambda) {
  CheckWeights(w, d);
  const std::vector<double> mean = d.ColumnMeans();
  double value = 0.0;
  double sq = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    value += w[k] * mean[k];
    sq += w[k] * w[k];
  }
  return value + 0.5 * lambda * sq;
}

double LinearObjective(std::span<const double> w,
                       std::span<const QueryRecord> data,
                       const ConcaveFunction& g, double lambda) {
  return LinearObjective(w, ComputeDivergences(data, g), lambda);
}

std::vector<double> LinearGradient(std::span<const double> w,
                                   const DivergenceTable& d, double lambda) {
  CheckWeights(w, d);
  std::vector<double> grad = d.ColumnMeans();
  for (std::size_t k = 0; k < w.size(); ++k) grad[k] += lambda * w[k];
  return grad;
}

std::vector<double> LinearGradient(std::span<const double> w,
                                   std::span<const QueryRecord> data,
                                   const ConcaveFunction& g, double lambda) {
  return LinearGradient(w, ComputeDivergences(data, g), lambda);
}

void RunLinearEpoch(std::span<double> w, const DivergenceTable& d,
                    const TrainConfig& cfg, std::span<const std::size_t> order,
                    const TrainHooks& hooks) {
  std::vector<double> grad(w.size());
  if (cfg.batch == BatchMode::kFull) {
    grad = LinearGradient(w, d, cfg.lambda);
    ExpWeightUpdateInPlace(w, grad, cfg.mu);
    if (hooks.on_update) hooks.on_update(w);
    return;
  }
  for (std::size_t q : order) {
    const std::span<const double> row = d.row(q);
    for (std::size_t k = 0; k < w.size(); ++k) grad[k] = row[k] + cfg.lambda * w[k];
    ExpWeightUpdateInPlace(w, grad, cfg.mu);
    if (hooks.on_update) hooks.on_update(w);
  }
}

LinearModel TrainLinear(std::span<const QueryRecord> data,
                        const ConcaveFunction& g, const TrainConfig& cfg,
                        const TrainHooks& hooks) {
  cfg.Validate();
  const DivergenceTable d = ComputeDivergences(data, g);
  const std::size_t k = d.lists();

  LinearModel model;
  model.g = g;
  model.weights.assign(k, 1.0 / static_cast<double>(k));
  model.meta.lambda = cfg.lambda;
  model.meta.mu = cfg.mu;
  model.meta.epochs = cfg.epochs;
  model.meta.batch = cfg.batch;
  model.meta.seed = cfg.seed;
  model.meta.tol = cfg.tol;

  bool warned_zero = false;
  std::vector<double> previous(k);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    previous = model.weights;
    RunLinearEpoch(model.weights, d, cfg,
                   EpochOrder(d.queries(), cfg.seed, epoch, cfg.batch), hooks);
    const double objective = LinearObjective(model.weights, d, cfg.lambda);
    model.meta.epochs_run = epoch + 1;
    model.meta.final_objective = objective;
    if (!std::isfinite(objective)) {
      throw NumericalError("linear objective became non-finite at epoch " +
                           std::to_string(epoch + 1) + " (last good epoch " +
                           std::to_string(epoch) + ")");
    }
    if (hooks.on_epoch) hooks.on_epoch(epoch + 1, objective);
    if (!warned_zero && k > 1 &&
        std::any_of(model.weights.begin(), model.weights.end(),
                    [](double v) { return v == 0.0; })) {
      warned_zero = true;
      if (hooks.on_warning) {
        hooks.on_warning("a weight underflowed to zero; multiplicative updates "
                         "cannot revive it");
      }
    }
    double change = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      change = std::max(change, std::abs(model.weights[i] - previous[i]));
    }
    if (change < cfg.tol) break;
  }
  return model;
}

Aggregate AggregateLinear(std::span<const double> w,
                          std::span<const ScoreList> lists) {
  if (lists.size() != w.size()) {
    throw ValidationError("model expects K = " + std::to_string(w.size()) +
                          " score lists, got " + std::to_string(lists.size()));
  }
  if (lists.empty()) throw ValidationError("no score lists to aggregate");
  const std::size_t n = lists.front().size();
  Aggregate out;
  out.scores.assign(n, 0.0);
  for (std::size_t k = 0; k < lists.size(); ++k) {
    if (lists[k].size() != n) {
      throw ValidationError("score lists have different lengths");
    }
    for (std::size_t c = 0; c < n; ++c) out.scores[c] += w[k] * lists[k][c];
  }
  out.ranking = RankFromScores(out.scores);
  out.sorted_scores.resize(n);
  for (std::size_t p = 0; p < n; ++p) out.sorted_scores[p] = out.scores[out.ranking[p]];
  return out;
}

Aggregate InferLinear(const LinearModel& model, std::span<const ScoreList> lists) {
  return AggregateLinear(model.weights, lists);
}

}  // namespace lbrank
