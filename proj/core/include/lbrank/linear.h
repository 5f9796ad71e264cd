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

// Linear aggregation: a simplex weight per score list, trained to minimize
//
//   (1/|Q|) sum_q sum_k w_k d(x_k^q | truth^q) + (lambda/2) |w|^2
//
// with exponentiated-gradient steps. Inference sorts sum_k w_k x_k, which
// minimizes sum_k w_k d(x_k | s) over all rankings s.

#ifndef LBRANK_LINEAR_H_
#define LBRANK_LINEAR_H_

#include <cstddef>
#include <span>
#include <vector>

#include "lbrank/concave.h"
#include "lbrank/dataset.h"
#include "lbrank/training.h"

namespace lbrank {

struct LinearTrainMeta {
  double lambda = 0.0;
  double mu = 0.0;
  int epochs = 0;
  int epochs_run = 0;
  BatchMode batch = BatchMode::kPerQuery;
  std::uint64_t seed = 0;
  double tol = 0.0;
  double final_objective = 0.0;
};

struct LinearModel {
  std::vector<double> weights;
  ConcaveFunction g;
  LinearTrainMeta meta;

  std::size_t num_lists() const { return weights.size(); }
  // Throws ValidationError unless weights are on the simplex.
  void Validate(double tolerance = 1e-12) const;
};

double LinearObjective(std::span<const double> w, const DivergenceTable& d,
                       double lambda);
double LinearObjective(std::span<const double> w,
                       std::span<const QueryRecord> data,
                       const ConcaveFunction& g, double lambda);

std::vector<double> LinearGradient(std::span<const double> w,
                                   const DivergenceTable& d, double lambda);
std::vector<double> LinearGradient(std::span<const double> w,
                                   std::span<const QueryRecord> data,
                                   const ConcaveFunction& g, double lambda);

// One pass over the queries in `order`; w is updated in place.
void RunLinearEpoch(std::span<double> w, const DivergenceTable& d,
                    const TrainConfig& cfg, std::span<const std::size_t> order,
                    const TrainHooks& hooks = {});

// Starts from uniform weights. Throws NumericalError if the objective turns
// non-finite.
LinearModel TrainLinear(std::span<const QueryRecord> data,
                        const ConcaveFunction& g, const TrainConfig& cfg,
                        const TrainHooks& hooks = {});

// Sorts sum_k w_k x_k. Throws ValidationError on shape mismatch.
Aggregate AggregateLinear(std::span<const double> w,
                          std::span<const ScoreList> lists);
Aggregate InferLinear(const LinearModel& model, std::span<const ScoreList> lists);

}  // namespace lbrank

#endif  // LBRANK_LINEAR_H_
