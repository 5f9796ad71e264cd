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


#include "lbrank/nested.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lbrank/divergence.h"
#include "lbrank/errors.h"

namespace lbrank {

std::string_view ToString(Activation a) {
  switch (a) {
    case Activation::kLog1p:
      return "log1p";
    case Activation::kSqrt1p:
      return "sqrt1p";
    case Activation::kIdentity:
      return "identity";
  }
  return "identity";
}

Activation ParseActivation(std::string_view text) {
  if (text == "log1p") return Activation::kLog1p;
  if (text == "sqrt1p") return Activation::kSqrt1p;
  if (text == "identity") return Activation::kIdentity;
  throw ValidationError("unknown activation '" + std::string(text) +
                        "' (expected log1p, sqrt1p or identity)");
}

double ActivationValue(Activation a, double z) {
  switch (a) {
    case Activation::kLog1p:
      return std::log1p(z);
    case Activation::kSqrt1p:
      return std::sqrt(1.0 + z) - 1.0;
    case Activation::kIdentity:
      return z;
  }
  return z;
}

double ActivationDerivative(Activation a, double z) {
  switch (a) {
    case Activation::kLog1p:
      return 1.0 / (1.0 + z);
    case Activation::kSqrt1p:
      return 0.5 / std::sqrt(1.0 + z);
    case Activation::kIdentity:
      return 1.0;
  }
  return 1.0;
}

double ActivationDomainMin(Activation a) {
  return a == Activation::kIdentity ? -std::numeric_limits<double>::infinity()
                                    : -1.0;
}

std::string_view ToString(GradientMode m) {
  return m == GradientMode::kAnalytic ? "analytic" : "paper-literal";
}

GradientMode ParseGradientMode(std::string_view text) {
  if (text == "analytic") return GradientMode::kAnalytic;
  if (text == "paper-literal") return GradientMode::kPaperLiteral;
  throw ValidationError("unknown gradient mode '" + std::string(text) +
                        "' (expected analytic or paper-literal)");
}

std::string_view ToString(ObjectiveSense s) {
  return s == ObjectiveSense::kPaperDescent ? "paper_descent" : "ascent";
}

ObjectiveSense ParseObjectiveSense(std::string_view text) {
  if (text == "paper_descent" || text == "descent") return ObjectiveSense::kPaperDescent;
  if (text == "ascent") return ObjectiveSense::kAscent;
  throw ValidationError("unknown objective sense '" + std::string(text) +
                        "' (expected paper_descent or ascent)");
}

void NestedConfig::Validate() const {
  TrainConfig::Validate();
  if (hidden < 1) throw ValidationError("hidden width K2 must be at least 1");
  if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0)) {
    throw ValidationError("lambda1 and lambda2 must be non-negative");
  }
}

NestedModel::NestedModel(std::size_t inputs, std::size_t hidden, Activation a1,
                         Activation a2, ConcaveFunction g_fn)
    : phi1(a1), phi2(a2), g(std::move(g_fn)), inputs_(inputs), hidden_(hidden) {
  if (inputs == 0 || hidden == 0) {
    throw ValidationError("nested model needs K1 >= 1 and K2 >= 1");
  }
  w1_.assign(inputs * hidden, 1.0 / static_cast<double>(inputs));
  w2_.assign(hidden, 1.0 / static_cast<double>(hidden));
}

void NestedModel::Validate(double tolerance) const {
  if (inputs_ == 0 || hidden_ == 0 || w1_.size() != inputs_ * hidden_ ||
      w2_.size() != hidden_) {
    throw ValidationError("nested model has inconsistent dimensions");
  }
  for (std::size_t i = 0; i < hidden_; ++i) {
    if (!OnSimplex(w1_row(i), tolerance)) {
      throw ValidationError("W1 row " + std::to_string(i) +
                            " is not on the simplex");
    }
  }
  if (!OnSimplex(w2_, tolerance)) throw ValidationError("W2 is not on the simplex");
}

namespace {

void CheckInputs(const NestedModel& model, std::size_t k) {
  if (k != model.inputs()) {
    throw ValidationError("nested model expects K1 = " +
                          std::to_string(model.inputs()) + " inputs, got " +
                          std::to_string(k));
  }
}

// hidden[i] = W1 row i . d; returns W2 . phi1(hidden) and fills act.
double Forward(const NestedModel& model, std::span<const double> d,
               std::span<double> hidden, std::span<double> act) {
  double out = 0.0;
  const std::span<const double> w2 = model.w2();
  for (std::size_t i = 0; i < model.hidden(); ++i) {
    const std::span<const double> row = model.w1_row(i);
    double h = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) h += row[j] * d[j];
    hidden[i] = h;
    act[i] = ActivationValue(model.phi1, h);
    out += w2[i] * act[i];
  }
  return out;
}

double Regularizer(const NestedModel& model) {
  double s1 = 0.0;
  for (double v : model.w1()) s1 += v * v;
  double s2 = 0.0;
  for (double v : model.w2()) s2 += v * v;
  return 0.5 * model.meta.lambda1 * s1 + 0.5 * model.meta.lambda2 * s2;
}

void BottomGradient(const NestedModel& model, std::span<const double> d,
                    std::span<const double> hidden, double output,
                    GradientMode mode, std::span<double> grad) {
  const std::size_t k1 = model.inputs();
  const double lambda1 = model.meta.lambda1;
  double d_sum = 0.0;
  for (double v : d) d_sum += v;
  const double outer = ActivationDerivative(model.phi2, output);
  for (std::size_t i = 0; i < model.hidden(); ++i) {
    const double slope = ActivationDerivative(model.phi1, hidden[i]);
    const std::span<const double> row = model.w1_row(i);
    double* g = grad.data() + i * k1;
    if (mode == GradientMode::kAnalytic) {
      const double scale = outer * model.w2()[i] * slope;
      for (std::size_t j = 0; j < k1; ++j) g[j] = scale * d[j] + lambda1 * row[j];
    } else {
      for (std::size_t j = 0; j < k1; ++j) g[j] = slope * d_sum + lambda1 * row[j];
    }
  }
}

void TopGradient(const NestedModel& model, std::span<const double> act,
                 double output, std::span<double> grad) {
  const double outer = ActivationDerivative(model.phi2, output);
  const std::span<const double> w2 = model.w2();
  for (std::size_t i = 0; i < model.hidden(); ++i) {
    grad[i] = outer * act[i] + model.meta.lambda2 * w2[i];
  }
}

}  // namespace

NestedForward NestedForwardPass(const NestedModel& model,
                                std::span<const double> divergences) {
  CheckInputs(model, divergences.size());
  NestedForward out;
  out.hidden.resize(model.hidden());
  std::vector<double> act(model.hidden());
  out.output = Forward(model, divergences, out.hidden, act);
  return out;
}

double NestedQueryObjective(const NestedModel& model,
                            std::span<const double> divergences) {
  const NestedForward f = NestedForwardPass(model, divergences);
  return ActivationValue(model.phi2, f.output) + Regularizer(model);
}

double NestedObjective(const NestedModel& model, const DivergenceTable& d) {
  CheckInputs(model, d.lists());
  if (d.queries() == 0) throw ValidationError("no query records");
  std::vector<double> hidden(model.hidden());
  std::vector<double> act(model.hidden());
  double sum = 0.0;
  for (std::size_t q = 0; q < d.queries(); ++q) {
    sum += ActivationValue(model.phi2, Forward(model, d.row(q), hidden, act));
  }
  return sum / static_cast<double>(d.queries()) + Regularizer(model);
}

double NestedObjective(const NestedModel& model, std::span<const QueryRecord> data) {
  return NestedObjective(model, ComputeDivergences(data, model.g));
}

NestedGradients ComputeNestedGradients(const NestedModel& model,
                                       std::span<const double> divergences,
                                       GradientMode mode) {
  CheckInputs(model, divergences.size());
  std::vector<double> hidden(model.hidden());
  std::vector<double> act(model.hidden());
  const double output = Forward(model, divergences, hidden, act);
  NestedGradients g;
  g.w1.resize(model.hidden() * model.inputs());
  g.w2.resize(model.hidden());
  BottomGradient(model, divergences, hidden, output, mode, g.w1);
  TopGradient(model, act, output, g.w2);
  for (double v : g.w1) {
    if (!std::isfinite(v)) throw NumericalError("non-finite W1 gradient");
  }
  for (double v : g.w2) {
    if (!std::isfinite(v)) throw NumericalError("non-finite W2 gradient");
  }
  return g;
}

NestedGradients ComputeNestedGradients(const NestedModel& model,
                                       const QueryRecord& record,
                                       GradientMode mode) {
  record.Validate();
  const ConcaveSpec spec(model.g, record.num_candidates());
  std::vector<double> d(record.num_lists());
  for (std::size_t k = 0; k < d.size(); ++k) {
    d[k] = LbDivergence(record.lists[k], record.truth, spec);
  }
  return ComputeNestedGradients(model, d, mode);
}

void RunNestedEpoch(NestedModel& model, const DivergenceTable& d,
                    const NestedConfig& cfg, std::span<const std::size_t> order,
                    const TrainHooks& hooks) {
  CheckInputs(model, d.lists());
  const std::size_t k1 = model.inputs();
  const std::size_t k2 = model.hidden();
  const double sign = cfg.sense == ObjectiveSense::kPaperDescent ? 1.0 : -1.0;
  thread_local std::vector<double> hidden, act, grad1, grad2, mean;
  hidden.resize(k2);
  act.resize(k2);
  grad1.resize(k1 * k2);
  grad2.resize(k2);

  auto step = [&](std::span<const double> div) {
    double output = Forward(model, div, hidden, act);
    BottomGradient(model, div, hidden, output, cfg.gradient_mode, grad1);
    for (std::size_t i = 0; i < k2; ++i) {
      const std::span<double> row = model.w1_row(i);
      ExpWeightUpdateInPlace(row, std::span<const double>(grad1).subspan(i * k1, k1),
                             cfg.mu, sign);
      if (hooks.on_update) hooks.on_update(row);
    }
    // Re-propagate through the updated bottom layer before touching W2.
    output = Forward(model, div, hidden, act);
    TopGradient(model, act, output, grad2);
    ExpWeightUpdateInPlace(model.w2(), grad2, cfg.mu, sign);
    if (hooks.on_update) hooks.on_update(model.w2());
  };

  if (cfg.batch == BatchMode::kFull) {
    // Full batch: one layered step on the query-averaged divergences.
    mean = d.ColumnMeans();
    step(mean);
    return;
  }
  for (std::size_t q : order) step(d.row(q));
}

NestedModel TrainNested(std::span<const QueryRecord> data,
                        const ConcaveFunction& g, const NestedConfig& cfg,
                        const TrainHooks& hooks) {
  cfg.Validate();
  const DivergenceTable d = ComputeDivergences(data, g);
  NestedModel model(d.lists(), cfg.hidden, cfg.phi1, cfg.phi2, g);
  model.meta.lambda1 = cfg.lambda1;
  model.meta.lambda2 = cfg.lambda2;
  model.meta.mu = cfg.mu;
  model.meta.epochs = cfg.epochs;
  model.meta.batch = cfg.batch;
  model.meta.seed = cfg.seed;
  model.meta.tol = cfg.tol;
  model.meta.gradient_mode = cfg.gradient_mode;
  model.meta.sense = cfg.sense;

  double previous_objective = NestedObjective(model, d);
  bool warned_oscillation = false;
  std::vector<double> previous_w1, previous_w2;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    previous_w1.assign(model.w1().begin(), model.w1().end());
    previous_w2.assign(model.w2().begin(), model.w2().end());
    RunNestedEpoch(model, d, cfg,
                   EpochOrder(d.queries(), cfg.seed, epoch, cfg.batch), hooks);
    const double objective = NestedObjective(model, d);
    model.meta.epochs_run = epoch + 1;
    model.meta.final_objective = objective;
    if (!std::isfinite(objective)) {
      throw NumericalError("nested objective became non-finite at epoch " +
                           std::to_string(epoch + 1) + " (last good epoch " +
                           std::to_string(epoch) + ")");
    }
    if (hooks.on_epoch) hooks.on_epoch(epoch + 1, objective);
    const double against =
        (objective - previous_objective) *
        (cfg.sense == ObjectiveSense::kPaperDescent ? 1.0 : -1.0);
    if (!warned_oscillation &&
        against > 1e-9 * std::max(1.0, std::abs(previous_objective))) {
      warned_oscillation = true;
      if (hooks.on_warning) {
        hooks.on_warning("nested objective moved against the update direction at "
                         "epoch " + std::to_string(epoch + 1) + ": " +
                         std::to_string(previous_objective) + " -> " +
                         std::to_string(objective) + "; consider a smaller mu");
      }
    }
    previous_objective = objective;
    double change = 0.0;
    for (std::size_t i = 0; i < previous_w1.size(); ++i) {
      change = std::max(change, std::abs(model.w1()[i] - previous_w1[i]));
    }
    for (std::size_t i = 0; i < previous_w2.size(); ++i) {
      change = std::max(change, std::abs(model.w2()[i] - previous_w2[i]));
    }
    if (change < cfg.tol) break;
  }
  return model;
}

Aggregate InferNested(const NestedModel& model, std::span<const ScoreList> lists) {
  CheckInputs(model, lists.size());
  const std::size_t n = lists.front().size();
  for (const ScoreList& x : lists) {
    if (x.size() != n) throw ValidationError("score lists have different lengths");
  }
  const std::size_t k2 = model.hidden();
  std::vector<double> z(k2 * n, 0.0);
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k2; ++i) {
    const std::span<const double> row = model.w1_row(i);
    for (std::size_t c = 0; c < n; ++c) {
      double v = 0.0;
      for (std::size_t j = 0; j < row.size(); ++j) v += row[j] * lists[j][c];
      z[i * n + c] = v;
      lowest = std::min(lowest, v);
    }
  }
  const bool bounded_domain = model.phi1 != Activation::kIdentity ||
                              model.phi2 != Activation::kIdentity;
  if (bounded_domain && lowest < 0.0) {
    for (double& v : z) v -= lowest;
  }

  Aggregate out;
  out.scores.assign(n, 0.0);
  const std::span<const double> w2 = model.w2();
  for (std::size_t c = 0; c < n; ++c) {
    double h = 0.0;
    for (std::size_t i = 0; i < k2; ++i) {
      h += w2[i] * ActivationValue(model.phi1, z[i * n + c]);
    }
    const double r = ActivationValue(model.phi2, h);
    if (!std::isfinite(r)) {
      throw ValidationError("activation domain violated for candidate " +
                            std::to_string(c));
    }
    out.scores[c] = r;
  }
  out.ranking = RankFromScores(out.scores);
  out.sorted_scores.resize(n);
  for (std::size_t p = 0; p < n; ++p) out.sorted_scores[p] = out.scores[out.ranking[p]];
  return out;
}

}  // namespace lbrank
