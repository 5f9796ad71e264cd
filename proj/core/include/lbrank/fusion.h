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

// Train/test comparison of score-fusion methods on one dataset.

#ifndef LBRANK_FUSION_H_
#define LBRANK_FUSION_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lbrank/concave.h"
#include "lbrank/dataset.h"
#include "lbrank/linear.h"
#include "lbrank/nested.h"

namespace lbrank {

enum class FusionMethod {
  kAveraging,         // uniform weights
  kAccuracyWeighted,  // weights proportional to per-list training top-1 accuracy
  kLinearLbd,
  kNestedLbd,
};

std::string_view ToString(FusionMethod m);
FusionMethod ParseFusionMethod(std::string_view text);

struct FusionConfig {
  std::vector<FusionMethod> methods = {
      FusionMethod::kAveraging, FusionMethod::kAccuracyWeighted,
      FusionMethod::kLinearLbd, FusionMethod::kNestedLbd};
  // Leading fraction of records used for training; the rest is the test set.
  double train_fraction = 0.8;
  ConcaveFunction g = ConcaveFunction::Sqrt();
  TrainConfig linear;
  NestedConfig nested;
  // When non-empty, linear lambda and nested lambda1 are each chosen from
  // this grid by mean NDCG loss on the trailing validation_fraction of the
  // training split, then the model is refit on the whole training split.
  std::vector<double> lambda_grid;
  double validation_fraction = 0.25;
};

struct SplitMetrics {
  std::size_t queries = 0;
  double top1_error = 0.0;
  double mean_ndcg = 0.0;
  double mean_ndcg_loss = 0.0;
};

// Top-1 error and NDCG (log2 discount, EffectiveGrades) of fused rankings.
SplitMetrics EvaluateAggregates(std::span<const QueryRecord> records,
                                std::span<const Aggregate> fused);

struct MethodResult {
  FusionMethod method = FusionMethod::kAveraging;
  // Empty on success; otherwise why training or evaluation failed.
  std::string failure;
  // Method configuration as a JSON object text.
  std::string config;
  SplitMetrics train;
  SplitMetrics test;
  double wall_time_ms = 0.0;

  bool ok() const { return failure.empty(); }
};

struct FusionReport {
  DatasetMeta dataset_meta;
  double train_fraction = 0.0;
  std::size_t train_queries = 0;
  std::size_t test_queries = 0;
  std::vector<MethodResult> methods;

  const MethodResult* Find(FusionMethod m) const;
  // {dataset_meta, split, per_method: {name: {config, train_metrics,
  //  test_metrics, wall_time_ms} | {config, failure}}}
  std::string ToJson() const;
};

// Throws ValidationError if either split would be empty. Per-method failures
// are recorded in the report instead of thrown.
FusionReport RunFusionExperiment(const Dataset& data, const FusionConfig& cfg);

}  // namespace lbrank

#endif  // LBRANK_FUSION_H_
