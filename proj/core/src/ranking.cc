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


#include "lbrank/ranking.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "lbrank/errors.h"

namespace lbrank {

ScoreList::ScoreList(std::vector<double> scores) : scores_(std::move(scores)) {
  if (scores_.empty()) throw ValidationError("score list is empty");
  for (std::size_t i = 0; i < scores_.size(); ++i) {
    if (!std::isfinite(scores_[i])) {
      throw ValidationError("score list entry " + std::to_string(i) +
                            " is not finite");
    }
  }
}

Ranking::Ranking(std::vector<std::size_t> order) : order_(std::move(order)) {
  std::vector<bool> seen(order_.size(), false);
  for (std::size_t c : order_) {
    if (c >= order_.size()) {
      throw ValidationError("ranking entry " + std::to_string(c) +
                            " out of range for " +
                            std::to_string(order_.size()) + " candidates");
    }
    if (seen[c]) {
      throw ValidationError("ranking lists candidate " + std::to_string(c) +
                            " twice");
    }
    seen[c] = true;
  }
}

Ranking Ranking::Identity(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  return Ranking(std::move(order));
}

std::vector<std::size_t> Ranking::positions() const {
  std::vector<std::size_t> pos(order_.size());
  for (std::size_t i = 0; i < order_.size(); ++i) pos[order_[i]] = i;
  return pos;
}

Ranking RankFromScores(std::span<const double> scores) {
  for (double s : scores) {
    if (!std::isfinite(s)) throw ValidationError("cannot rank non-finite score");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  return Ranking(std::move(order));
}

}  // namespace lbrank
