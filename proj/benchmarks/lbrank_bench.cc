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


#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "lbrank/divergence.h"
#include "lbrank/linear.h"
#include "lbrank/nested.h"
#include "lbrank/synth.h"

namespace lbrank {
namespace {

std::vector<double> Uniform(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(n);
  for (double& v : x) v = u(rng);
  return x;
}

Dataset Data(std::size_t n, std::size_t k, std::size_t queries) {
  GeneratorParams p;
  p.num_candidates = n;
  p.num_lists = k;
  p.num_queries = queries;
  p.profiles = ParseProfiles("hetero", k);
  p.seed = 1;
  return GenerateSynthetic(p);
}

void BM_LbDivergence(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  const ScoreList x(Uniform(rng, n));
  const Ranking s = RankFromScores(Uniform(rng, n));
  const ConcaveSpec g(ConcaveFunction::Sqrt(), n);
  for (auto _ : state) benchmark::DoNotOptimize(LbDivergence(x, s, g));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LbDivergence)->RangeMultiplier(10)->Range(100, 100000)->Complexity();

void BM_LinearEpoch(benchmark::State& state) {
  const Dataset data = Data(static_cast<std::size_t>(state.range(0)),
                            static_cast<std::size_t>(state.range(1)), 20);
  TrainConfig cfg;
  cfg.epochs = 1;
  cfg.tol = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(TrainLinear(data.records, ConcaveFunction::Sqrt(), cfg).weights);
  }
}
BENCHMARK(BM_LinearEpoch)->ArgsProduct({{100, 1000, 10000}, {8, 16}})->Unit(benchmark::kMillisecond);

void BM_NestedEpoch(benchmark::State& state) {
  const auto k2 = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(2);
  DivergenceTable d(2000, 8);
  for (std::size_t q = 0; q < 2000; ++q) {
    for (std::size_t k = 0; k < 8; ++k) d.at(q, k) = Uniform(rng, 1)[0];
  }
  NestedModel model(8, k2, Activation::kLog1p, Activation::kLog1p, ConcaveFunction::Sqrt());
  NestedConfig cfg;
  cfg.hidden = k2;
  const std::vector<std::size_t> order = EpochOrder(2000, 0, 0, BatchMode::kPerQuery);
  for (auto _ : state) RunNestedEpoch(model, d, cfg, order);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NestedEpoch)->Arg(3)->Arg(30)->Arg(120)->Complexity()->Unit(benchmark::kMillisecond);

void BM_InferLinear(benchmark::State& state) {
  const Dataset data = Data(static_cast<std::size_t>(state.range(0)), 8, 1);
  const std::vector<double> w(8, 0.125);
  for (auto _ : state) {
    benchmark::DoNotOptimize(AggregateLinear(w, data.records[0].lists).ranking);
  }
}
BENCHMARK(BM_InferLinear)->Arg(100)->Arg(10000);

void BM_InferNested(benchmark::State& state) {
  const Dataset data = Data(static_cast<std::size_t>(state.range(0)), 8, 1);
  const NestedModel model(8, 3, Activation::kLog1p, Activation::kLog1p, ConcaveFunction::Sqrt());
  for (auto _ : state) {
    benchmark::DoNotOptimize(InferNested(model, data.records[0].lists).ranking);
  }
}
BENCHMARK(BM_InferNested)->Arg(100)->Arg(10000);

}  // namespace
}  // namespace lbrank

BENCHMARK_MAIN();
