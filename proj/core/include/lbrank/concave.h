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

#ifndef LBRANK_CONCAVE_H_
#define LBRANK_CONCAVE_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lbrank {

enum class ConcaveKind { kSqrt, kLog1p, kPower, kLinear, kCustom };

// An increasing concave g with g(0) = 0, independent of the ground-set size.
// It defines the cardinality-based submodular function f(S) = g(|S|).
//
// Textual form (used by the CLI and model files):
//   "sqrt", "log1p", "linear", "power:<alpha>" with alpha in (0, 1),
//   "custom:<d1>,<d2>,..." giving the first differences directly.
class ConcaveFunction {
 public:
  ConcaveFunction() = default;

  static ConcaveFunction Sqrt() { return ConcaveFunction(ConcaveKind::kSqrt); }
  static ConcaveFunction Log1p() { return ConcaveFunction(ConcaveKind::kLog1p); }
  static ConcaveFunction Linear() { return ConcaveFunction(ConcaveKind::kLinear); }
  static ConcaveFunction Power(double alpha);
  static ConcaveFunction Custom(std::vector<double> deltas);

  // Throws ValidationError for unknown kinds or bad parameters.
  static ConcaveFunction Parse(std::string_view text);
  std::string ToString() const;

  ConcaveKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  // Number of tabulated differences for kCustom, 0 otherwise.
  std::size_t table_size() const { return table_.size(); }

  // g(k) for integer k >= 0.
  double Value(std::size_t k) const;
  // g(k) - g(k-1) for k >= 1, computed without cancellation where possible.
  double Delta(std::size_t k) const;

  friend bool operator==(const ConcaveFunction&, const ConcaveFunction&) = default;

 private:
  explicit ConcaveFunction(ConcaveKind kind) : kind_(kind) {}

  ConcaveKind kind_ = ConcaveKind::kSqrt;
  double alpha_ = 0.5;
  std::vector<double> table_;
};

// The first-difference table of g tabulated for a ground set of size N:
// deltas()[i] = g(i+1) - g(i), strictly positive and non-increasing.
class ConcaveSpec {
 public:
  ConcaveSpec() = default;
  // Throws ValidationError if n == 0, or if g is a custom table of another size.
  ConcaveSpec(const ConcaveFunction& g, std::size_t n);

  const ConcaveFunction& function() const { return function_; }
  std::size_t size() const { return deltas_.size(); }
  std::span<const double> deltas() const { return deltas_; }
  double delta(std::size_t position) const { return deltas_[position]; }
  // g(k) as the partial sum of deltas, k <= size().
  double g(std::size_t k) const;

 private:
  ConcaveFunction function_;
  std::vector<double> deltas_;
};

}  // namespace lbrank

#endif  // LBRANK_CONCAVE_H_
