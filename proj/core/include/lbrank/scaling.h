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

// Wall-clock scaling measurements for the training loops.

#ifndef LBRANK_SCALING_H_
#define LBRANK_SCALING_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace lbrank {

// Seconds for one linear training epoch over `queries` random queries,
// including the divergence evaluation of every (query, list) pair. Best of
// `repeats` runs.
double TimeLinearEpoch(std::size_t n, std::size_t k, std::size_t queries,
                       int repeats, std::uint64_t seed = 1);

// Seconds for one nested epoch over precomputed divergences (the hidden
// layer work only). Best of `repeats` runs.
double TimeNestedEpoch(std::size_t k1, std::size_t k2, std::size_t queries,
                       int repeats, std::uint64_t seed = 1);

// Least-squares slope of log(y) against log(x).
double FitPowerLawExponent(std::span<const double> x, std::span<const double> y);

struct BenchConfig {
  std::vector<std::size_t> n_grid = {100, 1000, 10000};
  std::size_t k = 8;
  std::size_t k2 = 120;
  // Baseline hidden width the k2 timing is compared against.
  std::size_t k2_base = 3;
  std::size_t queries = 40;
  std::size_t nested_queries = 20000;
  int repeats = 3;
  std::uint64_t seed = 1;

  void Validate() const;
};

struct BenchPoint {
  std::size_t n = 0;
  std::size_t k = 0;
  double seconds = 0.0;
};

struct BenchReport {
  std::vector<BenchPoint> linear;
  // Slope of log time on log N at fixed K.
  double n_exponent = 0.0;
  // time(N_max, 2K) / time(N_max, K).
  double k_doubling_ratio = 0.0;
  double nested_seconds_base = 0.0;
  double nested_seconds_wide = 0.0;
  // (time(k2) / time(k2_base)) / (k2 / k2_base); 1 means exactly linear.
  double k2_linearity = 0.0;
  BenchConfig config;

  std::string ToJson() const;
};

BenchReport RunScalingBench(const BenchConfig& cfg);

}  // namespace lbrank

#endif  // LBRANK_SCALING_H_
