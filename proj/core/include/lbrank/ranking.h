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

#ifndef LBRANK_RANKING_H_
#define LBRANK_RANKING_H_

#include <cstddef>
#include <span>
#include <vector>

namespace lbrank {

// A score-based permutation: one real-valued score per candidate.
// Every entry is finite; the list is never empty.
class ScoreList {
 public:
  ScoreList() = default;
  // Throws ValidationError on an empty vector or a non-finite entry.
  explicit ScoreList(std::vector<double> scores);

  std::size_t size() const { return scores_.size(); }
  double operator[](std::size_t candidate) const { return scores_[candidate]; }
  std::span<const double> values() const { return scores_; }

  friend bool operator==(const ScoreList&, const ScoreList&) = default;

 private:
  std::vector<double> scores_;
};

// An order-based permutation. order()[i] is the candidate placed at
// position i (0 is best). Always a bijection on {0, ..., size()-1}.
class Ranking {
 public:
  Ranking() = default;
  // Throws ValidationError unless order is a permutation of 0..n-1.
  explicit Ranking(std::vector<std::size_t> order);

  static Ranking Identity(std::size_t n);

  std::size_t size() const { return order_.size(); }
  std::size_t operator[](std::size_t position) const { return order_[position]; }
  std::span<const std::size_t> order() const { return order_; }

  // positions()[c] is the position of candidate c.
  std::vector<std::size_t> positions() const;

  friend bool operator==(const Ranking&, const Ranking&) = default;

 private:
  std::vector<std::size_t> order_;
};

// Sorts candidates by descending score. Ties go to the lower candidate index.
Ranking RankFromScores(std::span<const double> scores);
inline Ranking RankFromScores(const ScoreList& x) { return RankFromScores(x.values()); }

}  // namespace lbrank

#endif  // LBRANK_RANKING_H_
