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


#include "lbrank/scaling.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "json.hpp"
#include "lbrank/errors.h"
#include "lbrank/linear.h"
#include "lbrank/nested.h"

namespace lbrank {
namespace {

using Clock = std::chrono::steady_clock;

std::vector<QueryRecord> RandomQueries(std::size_t n, std::size_t k,
                                       std::size_t queries, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<QueryRecord> out(queries);
  std::vector<double> scores(n);
  for (std::size_t q = 0; q < queries; ++q) {
    out[q].id = "q" + std::to_string(q);
    for (double& v : scores) v = unit(rng);
    out[q].truth = RankFromScores(scores);
    for (std::size_t i = 0; i < k; ++i) {
      for (double& v : scores) v = unit(rng);
      out[q].lists.emplace_back(scores);
    }
  }
  return out;
}

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// One linear epoch over a fixed random dataset, divergences included.
class LinearEpochTimer {
 public:
  LinearEpochTimer(std::size_t n, std::size_t k, std::size_t queries, std::uint64_t seed)
      : data_(RandomQueries(n, k, queries, seed)),
        order_(EpochOrder(queries, seed, 0, cfg_.batch)),
        k_(k) {
    cfg_.epochs = 1;
  }

  double Run() {
    const auto start = Clock::now();
    const DivergenceTable d = ComputeDivergences(data_, ConcaveFunction::Sqrt());
    std::vector<double> w(k_, 1.0 / static_cast<double>(k_));
    RunLinearEpoch(w, d, cfg_, order_);
    const double t = Seconds(start);
    if (!std::isfinite(w[0])) throw NumericalError("timing run diverged");
    return t;
  }

 private:
  TrainConfig cfg_;
  std::vector<QueryRecord> data_;
  std::vector<std::size_t> order_;
  std::size_t k_;
};

// One nested epoch over a fixed random divergence table.
class NestedEpochTimer {
 public:
  NestedEpochTimer(std::size_t k1, std::size_t k2, std::size_t queries, std::uint64_t seed)
      : d_(queries, k1), k1_(k1), k2_(k2) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t q = 0; q < queries; ++q) {
      for (std::size_t j = 0; j < k1; ++j) d_.at(q, j) = unit(rng);
    }
    cfg_.hidden = k2;
    cfg_.mu = 1e-3;
    order_ = EpochOrder(queries, seed, 0, cfg_.batch);
  }

  double Run() {
    NestedModel model(k1_, k2_, cfg_.phi1, cfg_.phi2, ConcaveFunction::Sqrt());
    const auto start = Clock::now();
    RunNestedEpoch(model, d_, cfg_, order_);
    return Seconds(start);
  }

 private:
  DivergenceTable d_;
  NestedConfig cfg_;
  std::vector<std::size_t> order_;
  std::size_t k1_;
  std::size_t k2_;
};

}  // namespace

double TimeLinearEpoch(std::size_t n, std::size_t k, std::size_t queries,
                       int repeats, std::uint64_t seed) {
  LinearEpochTimer timer(n, k, queries, seed);
  timer.Run();
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(repeats, 1); ++r) best = std::min(best, timer.Run());
  return best;
}

double TimeNestedEpoch(std::size_t k1, std::size_t k2, std::size_t queries,
                       int repeats, std::uint64_t seed) {
  NestedEpochTimer timer(k1, k2, queries, seed);
  timer.Run();
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(repeats, 1); ++r) best = std::min(best, timer.Run());
  return best;
}

double FitPowerLawExponent(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ValidationError("power-law fit needs at least two points");
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw ValidationError("power-law fit needs distinct x values");
  return sxy / sxx;
}

void BenchConfig::Validate() const {
  if (n_grid.size() < 2) throw ValidationError("--n-grid needs at least two sizes");
  for (std::size_t n : n_grid) {
    if (n < 2) throw ValidationError("--n-grid sizes must be at least 2");
  }
  if (k < 1) throw ValidationError("--k must be at least 1");
  if (k2 < 1 || k2_base < 1) throw ValidationError("--k2 must be at least 1");
  if (queries < 1 || nested_queries < 1) throw ValidationError("query count must be positive");
  if (repeats < 1) throw ValidationError("--repeats must be at least 1");
}

BenchReport RunScalingBench(const BenchConfig& cfg) {
  cfg.Validate();
  BenchReport report;
  report.config = cfg;
  std::vector<double> xs, ys;
  for (std::size_t n : cfg.n_grid) {
    const double t = TimeLinearEpoch(n, cfg.k, cfg.queries, cfg.repeats, cfg.seed);
    report.linear.push_back({n, cfg.k, t});
    xs.push_back(static_cast<double>(n));
    ys.push_back(t);
  }
  report.n_exponent = FitPowerLawExponent(xs, ys);
  const std::size_t n_max = *std::max_element(cfg.n_grid.begin(), cfg.n_grid.end());
  // Alternate the two widths so load spikes hit both equally.
  LinearEpochTimer single(n_max, cfg.k, cfg.queries, cfg.seed);
  LinearEpochTimer doubled(n_max, 2 * cfg.k, cfg.queries, cfg.seed);
  single.Run();
  doubled.Run();
  double t_single = std::numeric_limits<double>::infinity();
  double t_double = std::numeric_limits<double>::infinity();
  for (int r = 0; r < cfg.repeats; ++r) {
    t_single = std::min(t_single, single.Run());
    t_double = std::min(t_double, doubled.Run());
  }
  report.linear.push_back({n_max, 2 * cfg.k, t_double});
  report.k_doubling_ratio = t_double / t_single;

  NestedEpochTimer base(cfg.k, cfg.k2_base, cfg.nested_queries, cfg.seed);
  NestedEpochTimer wide(cfg.k, cfg.k2, cfg.nested_queries, cfg.seed);
  base.Run();
  wide.Run();
  report.nested_seconds_base = std::numeric_limits<double>::infinity();
  report.nested_seconds_wide = std::numeric_limits<double>::infinity();
  // The narrow epoch is cheap, so it gets several samples per round.
  const int base_samples = static_cast<int>(std::clamp<std::size_t>(cfg.k2 / cfg.k2_base, 1, 8));
  for (int r = 0; r < cfg.repeats; ++r) {
    for (int s = 0; s < base_samples; ++s) {
      report.nested_seconds_base = std::min(report.nested_seconds_base, base.Run());
    }
    report.nested_seconds_wide = std::min(report.nested_seconds_wide, wide.Run());
  }
  report.k2_linearity =
      (report.nested_seconds_wide / report.nested_seconds_base) /
      (static_cast<double>(cfg.k2) / static_cast<double>(cfg.k2_base));
  return report;
}

std::string BenchReport::ToJson() const {
  nlohmann::ordered_json j;
  nlohmann::ordered_json points = nlohmann::ordered_json::array();
  for (const BenchPoint& p : linear) {
    points.push_back({{"N", p.n}, {"K", p.k}, {"seconds_per_epoch", p.seconds}});
  }
  j["linear_epochs"] = std::move(points);
  j["n_exponent"] = n_exponent;
  j["k_doubling_ratio"] = k_doubling_ratio;
  j["nested"] = {{"K1", config.k},
                 {"K2_base", config.k2_base},
                 {"K2", config.k2},
                 {"queries", config.nested_queries},
                 {"seconds_base", nested_seconds_base},
                 {"seconds_wide", nested_seconds_wide},
                 {"k2_linearity", k2_linearity}};
  j["repeats"] = config.repeats;
  j["queries"] = config.queries;
  return j.dump(2) + "\n";
}

}  // namespace lbrank
