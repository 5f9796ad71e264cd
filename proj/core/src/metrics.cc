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


#include "lbrank/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "lbrank/divergence.h"
#include "lbrank/errors.h"

namespace lbrank {

RelevanceGrades::RelevanceGrades(std::vector<double> grades)
    : grades_(std::move(grades)) {
  if (grades_.empty()) throw ValidationError("relevance grades are empty");
  bool any_positive = false;
  for (std::size_t c = 0; c < grades_.size(); ++c) {
    if (!std::isfinite(grades_[c]) || grades_[c] < 0.0) {
      throw ValidationError("relevance grade " + std::to_string(c) +
                            " must be finite and non-negative");
    }
    any_positive |= grades_[c] > 0.0;
  }
  if (!any_positive) throw ValidationError("relevance grades are all zero");
}

RelevanceGrades RelevanceGrades::FromTruth(const Ranking& truth) {
  const std::size_t n = truth.size();
  std::vector<double> grades(n);
  for (std::size_t p = 0; p < n; ++p) {
    grades[truth[p]] = static_cast<double>(n - 1 - p);
  }
  // A single candidate would get grade 0 everywhere.
  if (n == 1) grades[0] = 1.0;
  return RelevanceGrades(std::move(grades));
}

DiscountSpec::DiscountSpec(std::vector<double> discounts)
    : discounts_(std::move(discounts)) {
  if (discounts_.empty()) throw ValidationError("discounts are empty");
  for (std::size_t i = 0; i < discounts_.size(); ++i) {
    if (!std::isfinite(discounts_[i]) || discounts_[i] <= 0.0) {
      throw ValidationError("discount " + std::to_string(i) + " must be positive");
    }
    if (i > 0 && discounts_[i] > discounts_[i - 1]) {
      throw ValidationError("discounts must be non-increasing (position " +
                            std::to_string(i) + ")");
    }
  }
}

DiscountSpec DiscountSpec::Log2(std::size_t n) {
  std::vector<double> d(n);
  for (std::size_t p = 0; p < n; ++p) d[p] = 1.0 / std::log2(static_cast<double>(p) + 2.0);
  return DiscountSpec(std::move(d));
}

namespace {

void CheckShapes(const Ranking& ranking, const Ranking& truth,
                 const RelevanceGrades& grades, const DiscountSpec& discount) {
  const std::size_t n = truth.size();
  if (ranking.size() != n || grades.size() != n || discount.size() != n) {
    throw ValidationError("NDCG: ranking, truth, grades and discounts must share N");
  }
  for (std::size_t p = 1; p < n; ++p) {
    if (grades[truth[p]] > grades[truth[p - 1]]) {
      throw ValidationError("NDCG: truth does not order the grades (position " +
                            std::to_string(p) + ")");
    }
  }
}

double DiscountedGain(const Ranking& ranking, const RelevanceGrades& grades,
                      const DiscountSpec& discount) {
  double sum = 0.0;
  for (std::size_t p = 0; p < ranking.size(); ++p) {
    sum += grades[ranking[p]] * discount[p];
  }
  return sum;
}

}  // namespace

double Ndcg(const Ranking& ranking, const Ranking& truth,
            const RelevanceGrades& grades, const DiscountSpec& discount) {
  CheckShapes(ranking, truth, grades, discount);
  if (ranking == truth) return 1.0;
  return DiscountedGain(ranking, grades, discount) /
         DiscountedGain(truth, grades, discount);
}

double NdcgLoss(const Ranking& ranking, const Ranking& truth,
                const RelevanceGrades& grades, const DiscountSpec& discount) {
  return 1.0 - Ndcg(ranking, truth, grades, discount);
}

BoundReport RankLossBound(const ScoreList& x, const Ranking& ranking,
                       const ConcaveSpec& g,
                       std::optional<std::size_t> num_lists) {
  if (ranking.size() != x.size() || g.size() != x.size()) {
    throw ValidationError("bound: scores, ranking and g must share N");
  }
  const std::size_t n = x.size();
  BoundReport report;
  const auto [lo, hi] = std::minmax_element(x.values().begin(), x.values().end());
  report.epsilon = *hi - *lo;
  report.Z = SortedWeightedMass(x, g);
  if (!(report.Z > 0.0)) {
    throw ValidationError("bound undefined: sorted weighted mass Z = " +
                          std::to_string(report.Z) + " is not positive");
  }
  // g(1) - g(N) + g(N-1) = delta(1) - delta(N).
  const double spread = g.delta(0) - g.delta(n - 1);
  report.bound_n_as_N = static_cast<double>(n) / report.Z * report.epsilon * spread;
  if (num_lists) {
    report.bound_n_as_K =
        static_cast<double>(*num_lists) / report.Z * report.epsilon * spread;
  }
  const Ranking sorted = RankFromScores(x);
  double min_term = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    min_term = std::min(min_term, x[sorted[i]] * g.delta(i));
  }
  report.bound_normalized = min_term > 0.0
                                ? report.epsilon * spread / min_term
                                : std::numeric_limits<double>::infinity();
  report.loss = LbDivergence(x, ranking, g) / report.Z;
  return report;
}

}  // namespace lbrank
