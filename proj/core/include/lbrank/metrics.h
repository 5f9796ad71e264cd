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

#ifndef LBRANK_METRICS_H_
#define LBRANK_METRICS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lbrank/concave.h"
#include "lbrank/ranking.h"

namespace lbrank {

// Non-negative per-candidate relevance with at least one positive entry.
class RelevanceGrades {
 public:
  RelevanceGrades() = default;
  explicit RelevanceGrades(std::vector<double> grades);

  // Linear gain by ground-truth position: the candidate at position p of
  // truth gets N - 1 - p.
  static RelevanceGrades FromTruth(const Ranking& truth);

  std::size_t size() const { return grades_.size(); }
  double operator[](std::size_t candidate) const { return grades_[candidate]; }
  std::span<const double> values() const { return grades_; }

  friend bool operator==(const RelevanceGrades&, const RelevanceGrades&) = default;

 private:
  std::vector<double> grades_;
};

// Positive, non-increasing position discounts.
class DiscountSpec {
 public:
  DiscountSpec() = default;
  explicit DiscountSpec(std::vector<double> discounts);

  // D(p) = 1 / log2(p + 2) for 0-based position p.
  static DiscountSpec Log2(std::size_t n);

  std::size_t size() const { return discounts_.size(); }
  double operator[](std::size_t position) const { return discounts_[position]; }
  std::span<const double> values() const { return discounts_; }

 private:
  std::vector<double> discounts_;
};

// Discounted gain of `ranking` divided by that of the ideal ranking `truth`.
// truth must order the grades non-increasingly, otherwise ValidationError.
double Ndcg(const Ranking& ranking, const Ranking& truth,
            const RelevanceGrades& grades, const DiscountSpec& discount);

double NdcgLoss(const Ranking& ranking, const Ranking& truth,
                const RelevanceGrades& grades, const DiscountSpec& discount);

struct BoundReport {
  // d(x | ranking) / Z.
  double loss = 0.0;
  // (N / Z) * epsilon * (g(1) - g(N) + g(N-1)).
  double bound_n_as_N = 0.0;
  // epsilon * (g(1) - g(N) + g(N-1)) / min_i x[rank(x)[i]] * delta_g(i);
  // +infinity when that minimum is not positive.
  double bound_normalized = 0.0;
  // Same as bound_n_as_N with n read as the number of score lists, when
  // that count was supplied.
  std::optional<double> bound_n_as_K;
  // max_{i,j} |x(i) - x(j)|.
  double epsilon = 0.0;
  // Sum_i x[rank(x)[i]] * delta_g(i).
  double Z = 0.0;

  bool Satisfied(double tolerance = 1e-9) const {
    return loss <= bound_n_as_N + tolerance && loss <= bound_normalized + tolerance;
  }
};

// Evaluates the constant NDCG-loss upper bound for scores x against the
// loss of `ranking`. Throws ValidationError when Z <= 0.
BoundReport RankLossBound(const ScoreList& x, const Ranking& ranking,
                       const ConcaveSpec& g,
                       std::optional<std::size_t> num_lists = std::nullopt);

// 1 if the top candidate of ranking differs from that of truth.
inline double Top1Error(const Ranking& ranking, const Ranking& truth) {
  return ranking[0] == truth[0] ? 0.0 : 1.0;
}

}  // namespace lbrank

#endif  // LBRANK_METRICS_H_
