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


#include "lbrank/training.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "lbrank/divergence.h"
#include "lbrank/errors.h"

namespace lbrank {

std::string_view ToString(BatchMode mode) {
  return mode == BatchMode::kFull ? "full" : "per-query";
}

BatchMode ParseBatchMode(std::string_view text) {
  if (text == "full") return BatchMode::kFull;
  if (text == "per-query") return BatchMode::kPerQuery;
  throw ValidationError("unknown batch mode '" + std::string(text) +
                        "' (expected full or per-query)");
}

void TrainConfig::Validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw ValidationError("learning rate mu must be positive");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ValidationError("regularization lambda must be non-negative");
  }
  if (epochs < 1) throw ValidationError("epochs must be at least 1");
  if (!(tol >= 0.0)) throw ValidationError("tol must be non-negative");
}

std::vector<double> DivergenceTable::ColumnMeans() const {
  std::vector<double> means(lists_, 0.0);
  for (std::size_t q = 0; q < queries_; ++q) {
    for (std::size_t k = 0; k < lists_; ++k) means[k] += at(q, k);
  }
  for (double& m : means) m /= static_cast<double>(queries_);
  return means;
}

DivergenceTable ComputeDivergences(std::span<const QueryRecord> data,
                                   const ConcaveFunction& g) {
  CheckUniformShape(data);
  const ConcaveSpec spec(g, data.front().num_candidates());
  DivergenceTable table(data.size(), data.front().num_lists());
  for (std::size_t q = 0; q < data.size(); ++q) {
    const QueryRecord& r = data[q];
    for (std::size_t k = 0; k < r.num_lists(); ++k) {
      table.at(q, k) = LbDivergence(r.lists[k], r.truth, spec);
    }
  }
  return table;
}

void ExpWeightUpdateInPlace(std::span<double> w, std::span<const double> grad,
                            double mu, double sign) {
  const std::size_t n = w.size();
  // The normalized result does not change under a common shift of the
  // exponents, so subtract the largest to avoid overflow.
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (w[i] > 0.0) top = std::max(top, -sign * mu * grad[i]);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = w[i] > 0.0 ? w[i] * std::exp(-sign * mu * grad[i] - top) : 0.0;
    total += w[i];
  }
  for (std::size_t i = 0; i < n; ++i) w[i] /= total;
}

std::vector<double> ExpWeightUpdate(std::span<const double> w,
                                    std::span<const double> grad, double mu) {
  if (w.size() != grad.size() || w.empty()) {
    throw ValidationError("weight and gradient sizes differ");
  }
  if (!(mu > 0.0)) throw ValidationError("learning rate mu must be positive");
  if (!OnSimplex(w, 1e-9)) throw ValidationError("weights are not on the simplex");
  for (double v : grad) {
    if (!std::isfinite(v)) throw ValidationError("gradient is not finite");
  }
  std::vector<double> out(w.begin(), w.end());
  ExpWeightUpdateInPlace(out, grad, mu);
  return out;
}

std::vector<std::size_t> EpochOrder(std::size_t queries, std::uint64_t seed,
                                    int epoch, BatchMode mode) {
  std::vector<std::size_t> order(queries);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (mode == BatchMode::kPerQuery) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(epoch)};
    std::mt19937_64 rng(seq);
    std::shuffle(order.begin(), order.end(), rng);
  }
  return order;
}

bool OnSimplex(std::span<const double> w, double tolerance) {
  if (w.empty()) return false;
  double sum = 0.0;
  for (double v : w) {
    if (!(v >= 0.0) || !std::isfinite(v)) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= tolerance;
}

}  // namespace lbrank
