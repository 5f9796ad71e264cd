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


#include "lbrank/divergence.h"

#include <bit>
#include <string>
#include <utility>

#include "lbrank/errors.h"

namespace lbrank {
namespace {

void CheckSameSize(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw ValidationError(std::string(what) + ": size mismatch (" +
                          std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

SetFunctionOracle::SetFunctionOracle(std::size_t n,
                                     std::function<double(Subset)> evaluator)
    : n_(n), evaluator_(std::move(evaluator)) {
  if (n_ == 0 || n_ > kMaxGroundSet) {
    throw ValidationError("set function ground set must have 1.." +
                          std::to_string(kMaxGroundSet) + " elements");
  }
  if (!evaluator_) throw ValidationError("set function evaluator is empty");
}

SetFunctionOracle SetFunctionOracle::Cardinality(const ConcaveFunction& g,
                                                 std::size_t n) {
  return SetFunctionOracle(n, [g](Subset s) {
    return g.Value(static_cast<std::size_t>(std::popcount(s)));
  });
}

bool SetFunctionOracle::IsSubmodular(double tolerance) const {
  const Subset all = (Subset{1} << n_) - 1;
  // Diminishing returns on adjacent pairs (A, A + b) is equivalent to the
  // full A subset-of B condition.
  for (Subset a = 0; a <= all; ++a) {
    const double fa = (*this)(a);
    for (std::size_t e = 0; e < n_; ++e) {
      const Subset be = Subset{1} << e;
      if (a & be) continue;
      const double gain_a = (*this)(a | be) - fa;
      for (std::size_t b = 0; b < n_; ++b) {
        const Subset bb = Subset{1} << b;
        if ((a & bb) || b == e) continue;
        const double gain_b = (*this)(a | bb | be) - (*this)(a | bb);
        if (gain_b > gain_a + tolerance) return false;
      }
    }
  }
  return true;
}

bool SetFunctionOracle::IsMonotone(double tolerance) const {
  const Subset all = (Subset{1} << n_) - 1;
  for (Subset a = 0; a <= all; ++a) {
    const double fa = (*this)(a);
    for (std::size_t e = 0; e < n_; ++e) {
      const Subset be = Subset{1} << e;
      if (!(a & be) && (*this)(a | be) < fa - tolerance) return false;
    }
  }
  return true;
}

std::vector<double> HVector(const Ranking& s, const SetFunctionOracle& f) {
  CheckSameSize(s.size(), f.size(), "h-vector");
  std::vector<double> h(s.size());
  Subset prefix = 0;
  double previous = f(prefix);
  for (std::size_t i = 0; i < s.size(); ++i) {
    prefix |= Subset{1} << s[i];
    const double current = f(prefix);
    h[s[i]] = current - previous;
    previous = current;
  }
  return h;
}

double LbDivergenceGeneral(const ScoreList& x, const Ranking& s,
                           const SetFunctionOracle& f) {
  CheckSameSize(x.size(), s.size(), "LB divergence");
  CheckSameSize(x.size(), f.size(), "LB divergence");
  const std::vector<double> h_x = HVector(RankFromScores(x), f);
  const std::vector<double> h_s = HVector(s, f);
  double d = 0.0;
  for (std::size_t c = 0; c < x.size(); ++c) d += x[c] * (h_x[c] - h_s[c]);
  return d;
}

double LbDivergence(const ScoreList& x, const Ranking& s, const ConcaveSpec& g) {
  CheckSameSize(x.size(), s.size(), "LB divergence");
  CheckSameSize(x.size(), g.size(), "LB divergence");
  const Ranking sorted = RankFromScores(x);
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    d += (x[sorted[i]] - x[s[i]]) * g.delta(i);
  }
  return d;
}

double SortedWeightedMass(const ScoreList& x, const ConcaveSpec& g) {
  CheckSameSize(x.size(), g.size(), "weighted mass");
  const Ranking sorted = RankFromScores(x);
  double z = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) z += x[sorted[i]] * g.delta(i);
  return z;
}

}  // namespace lbrank
