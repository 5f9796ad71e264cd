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

// Pieces shared by the linear and nested aggregation trainers.

#ifndef LBRANK_TRAINING_H_
#define LBRANK_TRAINING_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lbrank/concave.h"
#include "lbrank/dataset.h"
#include "lbrank/ranking.h"

namespace lbrank {

enum class BatchMode {
  // One multiplicative update per query, queries shuffled every epoch.
  kPerQuery,
  // One update per epoch from the gradient averaged over all queries.
  kFull,
};

std::string_view ToString(BatchMode mode);
BatchMode ParseBatchMode(std::string_view text);

struct TrainConfig {
  double lambda = 0.0;
  double mu = 0.1;
  int epochs = 100;
  BatchMode batch = BatchMode::kPerQuery;
  std::uint64_t seed = 0;
  // Stop once max |w_new - w_old| over an epoch drops below tol.
  double tol = 1e-8;

  // Throws ValidationError unless mu > 0, lambda >= 0, epochs >= 1, tol >= 0.
  void Validate() const;
};

struct TrainHooks {
  // After every epoch with the full-data objective.
  std::function<void(int epoch, double objective)> on_epoch;
  // After every multiplicative update, once per normalized weight group.
  std::function<void(std::span<const double> group)> on_update;
  std::function<void(const std::string& message)> on_warning;
};

// d(x_k^q | truth^q) for every query q and list k, row-major |Q| x K.
class DivergenceTable {
 public:
  DivergenceTable(std::size_t queries, std::size_t lists)
      : queries_(queries), lists_(lists), values_(queries * lists, 0.0) {}

  std::size_t queries() const { return queries_; }
  std::size_t lists() const { return lists_; }
  double& at(std::size_t q, std::size_t k) { return values_[q * lists_ + k]; }
  double at(std::size_t q, std::size_t k) const { return values_[q * lists_ + k]; }
  std::span<const double> row(std::size_t q) const {
    return std::span<const double>(values_).subspan(q * lists_, lists_);
  }
  // Mean over queries, one entry per list.
  std::vector<double> ColumnMeans() const;

 private:
  std::size_t queries_;
  std::size_t lists_;
  std::vector<double> values_;
};

// Throws ValidationError on empty data or inconsistent shapes.
DivergenceTable ComputeDivergences(std::span<const QueryRecord> data,
                                   const ConcaveFunction& g);

// w_i <- w_i exp(-sign * mu * grad_i) / normalizer, shifted by the largest
// exponent before exponentiation. sign = -1 ascends. Entries equal to zero
// stay zero.
void ExpWeightUpdateInPlace(std::span<double> w, std::span<const double> grad,
                            double mu, double sign = 1.0);

// Returns the updated copy. w must be on the simplex, grad finite, mu > 0.
std::vector<double> ExpWeightUpdate(std::span<const double> w,
                                    std::span<const double> grad, double mu);

// Query visiting order for one epoch: a seeded shuffle for kPerQuery, the
// identity for kFull.
std::vector<std::size_t> EpochOrder(std::size_t queries, std::uint64_t seed,
                                    int epoch, BatchMode mode);

// Result of aggregating K score lists into one ranking.
struct Aggregate {
  Ranking ranking;
  // Fused score per candidate.
  std::vector<double> scores;
  // scores permuted into ranking order (non-increasing).
  std::vector<double> sorted_scores;
};

// True if w is non-negative and sums to one within tolerance.
bool OnSimplex(std::span<const double> w, double tolerance = 1e-12);

}  // namespace lbrank

#endif  // LBRANK_TRAINING_H_
