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


// Reference implementations for tests: exhaustive enumeration over subsets
// and permutations, and central finite differences.

#ifndef LBRANK_TESTS_ORACLES_H_
#define LBRANK_TESTS_ORACLES_H_

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "lbrank/concave.h"
#include "lbrank/dataset.h"
#include "lbrank/ranking.h"

namespace lbrank::testing {

inline std::vector<double> RandomScores(std::mt19937_64& rng, std::size_t n,
                                        double lo = -5.0, double hi = 5.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> x(n);
  for (double& v : x) v = u(rng);
  return x;
}

inline Ranking RandomRanking(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  return Ranking(std::move(order));
}

inline std::vector<double> RandomSimplex(std::mt19937_64& rng, std::size_t k) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(k);
  double sum = 0.0;
  for (double& v : w) sum += (v = e(rng) + 1e-3);
  for (double& v : w) v /= sum;
  return w;
}

// Positive, non-increasing first differences.
inline ConcaveFunction RandomConcaveTable(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> d(n);
  for (double& v : d) v = u(rng);
  std::sort(d.begin(), d.end(), std::greater<>());
  return ConcaveFunction::Custom(std::move(d));
}

// The chain marginals of `s` under f, evaluated directly from subsets.
inline std::vector<double> ChainMarginals(const Ranking& s,
                                          const std::function<double(std::uint64_t)>& f) {
  std::vector<double> h(s.size());
  std::uint64_t prefix = 0;
  double prev = f(0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    prefix |= std::uint64_t{1} << s[i];
    const double cur = f(prefix);
    h[s[i]] = cur - prev;
    prev = cur;
  }
  return h;
}

inline double PopcountConcave(const ConcaveFunction& g, std::uint64_t s) {
  return g.Value(static_cast<std::size_t>(std::popcount(s)));
}

// <x, h(sort(x)) - h(s)> via subset evaluation of f(S) = g(|S|).
inline double DivergenceBySubsets(const std::vector<double>& x, const Ranking& s,
                                  const ConcaveFunction& g) {
  auto f = [&](std::uint64_t set) { return PopcountConcave(g, set); };
  const std::vector<double> hx = ChainMarginals(RankFromScores(x), f);
  const std::vector<double> hs = ChainMarginals(s, f);
  double d = 0.0;
  for (std::size_t c = 0; c < x.size(); ++c) d += x[c] * (hx[c] - hs[c]);
  return d;
}

// Calls visit(ranking) for each of the n! rankings.
inline void ForEachRanking(std::size_t n, const std::function<void(const Ranking&)>& visit) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  do {
    visit(Ranking(order));
  } while (std::next_permutation(order.begin(), order.end()));
}

// Minimum of cost over all n! rankings.
inline double BruteForceMinimum(std::size_t n, const std::function<double(const Ranking&)>& cost) {
  double best = std::numeric_limits<double>::infinity();
  ForEachRanking(n, [&](const Ranking& r) { best = std::min(best, cost(r)); });
  return best;
}

inline double CentralDifference(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> at, std::size_t i, double step = 1e-5) {
  const double orig = at[i];
  at[i] = orig + step;
  const double hi = f(at);
  at[i] = orig - step;
  const double lo = f(at);
  return (hi - lo) / (2.0 * step);
}

inline double RelativeError(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

// A query whose K lists are random and whose truth is random.
inline QueryRecord RandomRecord(std::mt19937_64& rng, std::size_t n, std::size_t k,
                                std::string id = "q") {
  QueryRecord r;
  r.id = std::move(id);
  for (std::size_t j = 0; j < k; ++j) r.lists.emplace_back(RandomScores(rng, n, 0.0, 1.0));
  r.truth = RandomRanking(rng, n);
  return r;
}

}  // namespace lbrank::testing

#endif  // LBRANK_TESTS_ORACLES_H_
