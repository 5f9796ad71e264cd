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

// Lovász–Bregman divergence between a score list and a ranking.
//
// For a submodular f and ranking s, the h-vector assigns to the candidate at
// position i the marginal gain of adding it to the prefix of s before it.
// The divergence of scores x from ranking s is
//
//   d(x | s) = <x, h(rank(x)) - h(s)>,
//
// non-negative for monotone submodular f and zero when s sorts x.
// For f(S) = g(|S|) it collapses to
//
//   d(x | s) = sum_i (x[rank(x)[i]] - x[s[i]]) * delta_g(i),
//
// which is what LbDivergence computes in O(N log N). The general form is
// kept for small ground sets as an independent reference.

#ifndef LBRANK_DIVERGENCE_H_
#define LBRANK_DIVERGENCE_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "lbrank/concave.h"
#include "lbrank/ranking.h"

namespace lbrank {

// Subsets of {0, ..., n-1} as bitmasks; bit c set means candidate c is in.
using Subset = std::uint64_t;

// A black-box set function with f(empty) = 0 on a ground set of n <= 62
// candidates. Intended for small n: the property checks below enumerate
// all 2^n subsets.
class SetFunctionOracle {
 public:
  static constexpr std::size_t kMaxGroundSet = 62;

  SetFunctionOracle(std::size_t n, std::function<double(Subset)> evaluator);

  // f(S) = g(|S|).
  static SetFunctionOracle Cardinality(const ConcaveFunction& g, std::size_t n);

  std::size_t size() const { return n_; }
  double operator()(Subset s) const { return evaluator_(s); }

  // Exhaustive diminishing-returns check; 2^n * n evaluations.
  bool IsSubmodular(double tolerance = 1e-12) const;
  bool IsMonotone(double tolerance = 1e-12) const;

 private:
  std::size_t n_;
  std::function<double(Subset)> evaluator_;
};

// h[s[i]] = f({s[0..i]}) - f({s[0..i-1]}).
std::vector<double> HVector(const Ranking& s, const SetFunctionOracle& f);

// <x, h(rank(x)) - h(s)> evaluated through the oracle.
double LbDivergenceGeneral(const ScoreList& x, const Ranking& s,
                           const SetFunctionOracle& f);

// Cardinality-based fast path; g must be tabulated for x.size().
double LbDivergence(const ScoreList& x, const Ranking& s, const ConcaveSpec& g);

// Sum_i x[rank(x)[i]] * delta_g(i): the largest weighted mass any ranking
// can reach, and the normalizer of the divergence.
double SortedWeightedMass(const ScoreList& x, const ConcaveSpec& g);

}  // namespace lbrank

#endif  // LBRANK_DIVERGENCE_H_
