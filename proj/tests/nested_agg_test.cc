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


#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "lbrank/divergence.h"
#include "lbrank/errors.h"
#include "lbrank/linear.h"
#include "lbrank/nested.h"
#include "lbrank/synth.h"
#include "lbrank/training.h"
#include "oracles.h"

namespace lbrank {
namespace {

using testing::RandomRecord;
using testing::RandomScores;
using testing::RandomSimplex;

constexpr Activation kAll[] = {Activation::kLog1p, Activation::kSqrt1p, Activation::kIdentity};

NestedModel RandomModel(std::mt19937_64& rng, std::size_t k1, std::size_t k2, Activation a1,
                        Activation a2) {
  NestedModel m(k1, k2, a1, a2, ConcaveFunction::Sqrt());
  for (std::size_t i = 0; i < k2; ++i) {
    const std::vector<double> row = RandomSimplex(rng, k1);
    std::copy(row.begin(), row.end(), m.w1_row(i).begin());
  }
  const std::vector<double> w2 = RandomSimplex(rng, k2);
  std::copy(w2.begin(), w2.end(), m.w2().begin());
  return m;
}

Dataset Synthetic(std::size_t n, std::size_t k, std::size_t queries, std::uint64_t seed) {
  GeneratorParams p;
  p.num_candidates = n;
  p.num_lists = k;
  p.num_queries = queries;
  p.profiles = ParseProfiles("hetero", k);
  p.seed = seed;
  return GenerateSynthetic(p);
}

TEST(Activation, ValuesAndDerivatives) {
  for (Activation a : kAll) {
    EXPECT_EQ(ActivationValue(a, 0.0), 0.0) << ToString(a);
    double prev = ActivationDerivative(a, 0.0);
    for (double z = 0.0; z <= 100.0; z += 0.25) {
      const double d = ActivationDerivative(a, z);
      EXPECT_GT(d, 0.0);
      EXPECT_LE(d, prev);
      const double fd = (ActivationValue(a, z + 1e-6) - ActivationValue(a, z - 1e-6)) / 2e-6;
      EXPECT_NEAR(d, fd, 1e-6);
      prev = d;
    }
    EXPECT_EQ(ParseActivation(ToString(a)), a);
  }
  EXPECT_EQ(ActivationDomainMin(Activation::kLog1p), -1.0);
  EXPECT_THROW(ParseActivation("relu"), ValidationError);
}

TEST(NestedModel, UniformInitAndValidation) {
  NestedModel m(4, 3, Activation::kLog1p, Activation::kLog1p, ConcaveFunction::Sqrt());
  EXPECT_NO_THROW(m.Validate());
  for (double v : m.w1()) EXPECT_EQ(v, 0.25);
  for (double v : m.w2()) EXPECT_DOUBLE_EQ(v, 1.0 / 3.0);
  m.w1_row(1)[0] = 0.5;
  EXPECT_THROW(m.Validate(), ValidationError);
  EXPECT_THROW(NestedModel(0, 3, Activation::kLog1p, Activation::kLog1p, ConcaveFunction::Sqrt()),
               ValidationError);
}

TEST(NestedForward, Examples) {
  NestedModel m(3, 2, Activation::kLog1p, Activation::kLog1p, ConcaveFunction::Sqrt());
  const NestedForward zero = NestedForwardPass(m, std::vector<double>{0, 0, 0});
  EXPECT_EQ(zero.hidden, (std::vector<double>{0, 0}));
  EXPECT_EQ(zero.output, 0.0);

  NestedModel s(2, 1, Activation::kIdentity, Activation::kIdentity, ConcaveFunction::Sqrt());
  const NestedForward f = NestedForwardPass(s, std::vector<double>{0.2, 0.8});
  EXPECT_DOUBLE_EQ(f.hidden[0], 0.5);
  EXPECT_DOUBLE_EQ(f.output, 0.5);

  NestedModel sel(3, 2, Activation::kLog1p, Activation::kLog1p, ConcaveFunction::Sqrt());
  for (std::size_t i = 0; i < 2; ++i) {
    sel.w1_row(i)[0] = 0.0;
    sel.w1_row(i)[1] = 1.0;
    sel.w1_row(i)[2] = 0.0;
  }
  const NestedForward one = NestedForwardPass(sel, std::vector<double>{0.1, 0.7, 0.3});
  EXPECT_EQ(one.hidden, (std::vector<double>{0.7, 0.7}));
  EXPECT_THROW(NestedForwardPass(sel, std::vector<double>{0.1}), ValidationError);
}

TEST(NestedObjective, Examples) {
  DivergenceTable zero(2, 2);
  NestedModel m(2, 2, Activation::kLog1p, Activation::kLog1p, ConcaveFunction::Sqrt());
  EXPECT_EQ(NestedObjective(m, zero), 0.0);
  m.meta.lambda1 = m.meta.lambda2 = 1.0;
  EXPECT_DOUBLE_EQ(NestedObjective(m, zero), 0.75);

  NestedModel s(2, 1, Activation::kIdentity, Activation::kIdentity, ConcaveFunction::Sqrt());
  DivergenceTable d(1, 2);
  d.at(0, 0) = 0.2;
  d.at(0, 1) = 0.8;
  EXPECT_DOUBLE_EQ(NestedObjective(s, d), 0.5);
  EXPECT_THROW(NestedObjective(s, DivergenceTable(0, 2)), ValidationError);
}

TEST(NestedObjective, IdentityIsBilinearInMeanDivergence) {
  std::mt19937_64 rng(2);
  NestedModel m = RandomModel(rng, 3, 4, Activation::kIdentity, Activation::kIdentity);
  DivergenceTable d(5, 3);
  for (std::size_t q = 0; q < 5; ++q) {
    for (std::size_t k = 0; k < 3; ++k) d.at(q, k) = RandomScores(rng, 1, 0, 1)[0];
  }
  const std::vector<double> mean = d.ColumnMeans();
  double expected = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 3; ++j) expected += m.w2()[i] * m.w1(i, j) * mean[j];
  }
  EXPECT_NEAR(NestedObjective(m, d), expected, 1e-14);
}

TEST(NestedGradients, HandWorkedIdentity) {
  NestedModel m(2, 1, Activation::kIdentity, Activation::kIdentity, ConcaveFunction::Sqrt());
  const std::vector<double> d = {0.2, 0.8};
  const NestedGradients g = ComputeNestedGradients(m, d, GradientMode::kAnalytic);
  EXPECT_DOUBLE_EQ(g.w1[0], 0.2);
  EXPECT_DOUBLE_EQ(g.w1[1], 0.8);
  EXPECT_DOUBLE_EQ(g.w2[0], 0.5);
}

TEST(NestedGradients, ZeroDivergencesGiveZeroGradients) {
  std::mt19937_64 rng(3);
  for (Activation a : kAll) {
    const NestedModel m = RandomModel(rng, 3, 2, a, a);
    for (GradientMode mode : {GradientMode::kAnalytic, GradientMode::kPaperLiteral}) {
      const NestedGradients g = ComputeNestedGradients(m, std::vector<double>{0, 0, 0}, mode);
      for (double v : g.w1) EXPECT_EQ(v, 0.0);
      for (double v : g.w2) EXPECT_EQ(v, 0.0);
    }
  }
}

TEST(NestedGradients, PaperLiteralAgreesOnEqualDivergences) {
  NestedModel single(1, 1, Activation::kIdentity, Activation::kIdentity, ConcaveFunction::Sqrt());
  const std::vector<double> d1 = {0.4};
  EXPECT_EQ(ComputeNestedGradients(single, d1, GradientMode::kAnalytic).w1,
            ComputeNestedGradients(single, d1, GradientMode::kPaperLiteral).w1);

  // With K1 > 1 the two bottom gradients differ by a per-row constant, which
  // the row normalization removes.
  NestedModel m(3, 1, Activation::kIdentity, Activation::kIdentity, ConcaveFunction::Sqrt());
  m.meta.lambda1 = 0.3;
  m.w1_row(0)[0] = 0.5;
  m.w1_row(0)[1] = 0.3;
  m.w1_row(0)[2] = 0.2;
  const std::vector<double> d = {0.25, 0.25, 0.25};
  const NestedGradients a = ComputeNestedGradients(m, d, GradientMode::kAnalytic);
  const NestedGradients p = ComputeNestedGradients(m, d, GradientMode::kPaperLiteral);
  const std::vector<double> w(m.w1().begin(), m.w1().end());
  const std::vector<double> ua = ExpWeightUpdate(w, a.w1, 0.7);
  const std::vector<double> up = ExpWeightUpdate(w, p.w1, 0.7);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(ua[j], up[j], 1e-15);
  EXPECT_EQ(a.w2, p.w2);
}

TEST(NestedGradients, FromRecord) {
  std::mt19937_64 rng(4);
  const QueryRecord r = RandomRecord(rng, 7, 3);
  const NestedModel m = RandomModel(rng, 3, 2, Activation::kLog1p, Activation::kSqrt1p);
  std::vector<double> d(3);
  const ConcaveSpec spec(ConcaveFunction::Sqrt(), 7);
  for (std::size_t k = 0; k < 3; ++k) d[k] = LbDivergence(r.lists[k], r.truth, spec);
  EXPECT_EQ(ComputeNestedGradients(m, r, GradientMode::kAnalytic).w1,
            ComputeNestedGradients(m, d, GradientMode::kAnalytic).w1);
}

TEST(TrainNested, ZeroDivergencesKeepInitialization) {
  GeneratorParams p;
  p.num_candidates = 10;
  p.num_lists = 4;
  p.num_queries = 10;
  p.profiles = ParseProfiles("clean", 4);
  const Dataset data = GenerateSynthetic(p);
  NestedConfig cfg;
  cfg.lambda1 = 0.5;
  cfg.lambda2 = 0.5;
  cfg.epochs = 5;
  const NestedModel m = TrainNested(data.records, ConcaveFunction::Sqrt(), cfg);
  for (double v : m.w1()) EXPECT_NEAR(v, 0.25, 1e-15);
  for (double v : m.w2()) EXPECT_NEAR(v, 1.0 / 3.0, 1e-15);
}

TEST(TrainNested, SingleInputOnlyW2CanMove) {
  const Dataset data = Synthetic(8, 1, 12, 5);
  NestedConfig cfg;
  cfg.hidden = 4;
  cfg.epochs = 10;
  const NestedModel m = TrainNested(data.records, ConcaveFunction::Sqrt(), cfg);
  for (double v : m.w1()) EXPECT_EQ(v, 1.0);
  for (double v : m.w2()) EXPECT_NEAR(v, 0.25, 1e-15);
}

TEST(TrainNested, ReducesToLinear) {
  const Dataset data = Synthetic(15, 5, 60, 6);
  TrainConfig lin;
  lin.epochs = 30;
  lin.mu = 0.2;
  lin.seed = 4;
  NestedConfig nest;
  static_cast<TrainConfig&>(nest) = lin;
  nest.hidden = 1;
  nest.phi1 = nest.phi2 = Activation::kIdentity;
  const LinearModel a = TrainLinear(data.records, ConcaveFunction::Sqrt(), lin);
  const NestedModel b = TrainNested(data.records, ConcaveFunction::Sqrt(), nest);
  for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(a.weights[j], b.w1(0, j), 1e-3);
  EXPECT_EQ(b.w2()[0], 1.0);
}

TEST(TrainNested, AscentMovesOppositeToDescent) {
  const Dataset data = Synthetic(15, 4, 40, 7);
  NestedConfig cfg;
  cfg.epochs = 5;
  const NestedModel down = TrainNested(data.records, ConcaveFunction::Sqrt(), cfg);
  cfg.sense = ObjectiveSense::kAscent;
  const NestedModel up = TrainNested(data.records, ConcaveFunction::Sqrt(), cfg);
  const NestedModel init(4, 3, cfg.phi1, cfg.phi2, ConcaveFunction::Sqrt());
  const DivergenceTable d = ComputeDivergences(data.records, ConcaveFunction::Sqrt());
  EXPECT_LT(NestedObjective(down, d), NestedObjective(init, d));
  EXPECT_GT(NestedObjective(up, d), NestedObjective(init, d));
}

TEST(TrainNested, RejectsBadConfig) {
  const Dataset data = Synthetic(6, 2, 3, 1);
  NestedConfig cfg;
  cfg.hidden = 0;
  EXPECT_THROW(TrainNested(data.records, ConcaveFunction::Sqrt(), cfg), ValidationError);
  cfg.hidden = 2;
  cfg.lambda2 = -1;
  EXPECT_THROW(TrainNested(data.records, ConcaveFunction::Sqrt(), cfg), ValidationError);
}

TEST(InferNested, ReducesToLinear) {
  std::mt19937_64 rng(8);
  NestedModel m(3, 1, Activation::kIdentity, Activation::kIdentity, ConcaveFunction::Sqrt());
  const std::vector<double> w = {0.2, 0.5, 0.3};
  std::copy(w.begin(), w.end(), m.w1_row(0).begin());
  std::vector<ScoreList> lists;
  for (int j = 0; j < 3; ++j) lists.emplace_back(RandomScores(rng, 10));
  const Aggregate a = AggregateLinear(w, lists);
  const Aggregate b = InferNested(m, lists);
  EXPECT_EQ(a.ranking, b.ranking);
  EXPECT_EQ(a.sorted_scores, b.sorted_scores);
}

TEST(InferNested, IdenticalListsKeepTheirOrder) {
  std::mt19937_64 rng(9);
  for (Activation a : kAll) {
    const NestedModel m = RandomModel(rng, 4, 3, a, Activation::kLog1p);
    const ScoreList x(RandomScores(rng, 12));
    const std::vector<ScoreList> lists(4, x);
    EXPECT_EQ(InferNested(m, lists).ranking, RankFromScores(x));
  }
}

TEST(InferNested, TieBreak) {
  NestedModel m(2, 1, Activation::kIdentity, Activation::kIdentity, ConcaveFunction::Sqrt());
  const Aggregate a =
      InferNested(m, std::vector<ScoreList>{ScoreList({1, 0}), ScoreList({0, 1})});
  EXPECT_EQ(a.ranking, Ranking::Identity(2));
  EXPECT_EQ(a.sorted_scores, (std::vector<double>{0.5, 0.5}));
}

TEST(InferNested, ShiftsNegativeInputsIntoDomain) {
  NestedModel m(2, 2, Activation::kLog1p, Activation::kLog1p, ConcaveFunction::Sqrt());
  const std::vector<ScoreList> lists = {ScoreList({-5, -3, -4}), ScoreList({-6, -2, -4})};
  const Aggregate a = InferNested(m, lists);
  EXPECT_EQ(a.ranking, Ranking(std::vector<std::size_t>{1, 2, 0}));
  for (double s : a.scores) EXPECT_TRUE(std::isfinite(s));
  EXPECT_EQ(a.sorted_scores.back(), 0.0);
  EXPECT_THROW(InferNested(m, std::vector<ScoreList>{ScoreList({1, 2})}), ValidationError);
}

// Property checks over random instances.

TEST(NestedProperty, AnalyticGradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k1 = 1 + rng() % 5, k2 = 1 + rng() % 4, n = 2 + rng() % 19;
    const Activation a1 = kAll[rng() % 3], a2 = kAll[rng() % 3];
    NestedModel m = RandomModel(rng, k1, k2, a1, a2);
    m.meta.lambda1 = std::uniform_real_distribution<double>(0, 1)(rng);
    m.meta.lambda2 = std::uniform_real_distribution<double>(0, 1)(rng);
    const QueryRecord r = RandomRecord(rng, n, k1);
    const ConcaveSpec spec(ConcaveFunction::Sqrt(), n);
    std::vector<double> d(k1);
    for (std::size_t k = 0; k < k1; ++k) d[k] = LbDivergence(r.lists[k], r.truth, spec);
    const NestedGradients g = ComputeNestedGradients(m, d, GradientMode::kAnalytic);

    const std::vector<double> w1(m.w1().begin(), m.w1().end());
    auto f1 = [&](const std::vector<double>& v) {
      NestedModel p = m;
      std::copy(v.begin(), v.end(), p.w1().begin());
      return NestedQueryObjective(p, d);
    };
    for (std::size_t i = 0; i < w1.size(); ++i) {
      EXPECT_LE(testing::RelativeError(g.w1[i], testing::CentralDifference(f1, w1, i)), 1e-6);
    }
    const std::vector<double> w2(m.w2().begin(), m.w2().end());
    auto f2 = [&](const std::vector<double>& v) {
      NestedModel p = m;
      std::copy(v.begin(), v.end(), p.w2().begin());
      return NestedQueryObjective(p, d);
    };
    for (std::size_t i = 0; i < w2.size(); ++i) {
      EXPECT_LE(testing::RelativeError(g.w2[i], testing::CentralDifference(f2, w2, i)), 1e-6);
    }
  }
}

TEST(NestedProperty, EveryUpdateStaysOnSimplex) {
  const Dataset data = Synthetic(20, 6, 200, 11);
  for (GradientMode mode : {GradientMode::kAnalytic, GradientMode::kPaperLiteral}) {
    for (ObjectiveSense sense : {ObjectiveSense::kPaperDescent, ObjectiveSense::kAscent}) {
      NestedConfig cfg;
      cfg.hidden = 4;
      cfg.epochs = 5;
      cfg.mu = 0.5;
      cfg.lambda1 = 0.1;
      cfg.lambda2 = 0.1;
      cfg.gradient_mode = mode;
      cfg.sense = sense;
      cfg.tol = 0.0;
      std::size_t updates = 0;
      TrainHooks hooks;
      hooks.on_update = [&](std::span<const double> w) {
        ++updates;
        double sum = 0.0;
        for (double v : w) {
          ASSERT_GE(v, 0.0);
          sum += v;
        }
        ASSERT_LE(std::abs(sum - 1.0), 1e-12);
      };
      TrainNested(data.records, ConcaveFunction::Sqrt(), cfg, hooks);
      EXPECT_EQ(updates, 5u * 200u * 5u);
    }
  }
}

TEST(NestedProperty, InferenceRankingInvariantToTopActivation) {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 50; ++trial) {
    NestedModel m = RandomModel(rng, 3, 3, Activation::kLog1p, Activation::kLog1p);
    std::vector<ScoreList> lists;
    for (int j = 0; j < 3; ++j) lists.emplace_back(RandomScores(rng, 15, 0, 1));
    const Ranking base = InferNested(m, lists).ranking;
    for (Activation a : kAll) {
      m.phi2 = a;
      EXPECT_EQ(InferNested(m, lists).ranking, base);
    }
  }
}

TEST(NestedProperty, StructuralReductionInference) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = 1 + rng() % 6;
    NestedModel m(k, 1, Activation::kIdentity, Activation::kIdentity, ConcaveFunction::Sqrt());
    const std::vector<double> w = RandomSimplex(rng, k);
    std::copy(w.begin(), w.end(), m.w1_row(0).begin());
    std::vector<ScoreList> lists;
    for (std::size_t j = 0; j < k; ++j) lists.emplace_back(RandomScores(rng, 20));
    const Aggregate a = AggregateLinear(w, lists);
    const Aggregate b = InferNested(m, lists);
    EXPECT_EQ(a.ranking, b.ranking);
    EXPECT_EQ(a.scores, b.scores);
  }
}

double Midpoint(double a, double b) { return 0.5 * (a + b); }

TEST(NestedProperty, ConcaveInEachLayerSlice) {
  std::mt19937_64 rng(54);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k1 = 1 + rng() % 5, k2 = 1 + rng() % 4;
    const Activation a1 = kAll[rng() % 3], a2 = kAll[rng() % 3];
    const NestedModel p = RandomModel(rng, k1, k2, a1, a2);
    const NestedModel q = RandomModel(rng, k1, k2, a1, a2);
    const std::vector<double> d = RandomScores(rng, k1, 0, 3);

    // W1 fixed at p's, W2 moves from p's to q's.
    NestedModel mid = p;
    NestedModel end = p;
    for (std::size_t i = 0; i < k2; ++i) {
      end.w2()[i] = q.w2()[i];
      mid.w2()[i] = Midpoint(p.w2()[i], q.w2()[i]);
    }
    EXPECT_GE(NestedQueryObjective(mid, d),
              Midpoint(NestedQueryObjective(p, d), NestedQueryObjective(end, d)) - 1e-12);

    // W2 fixed at p's, W1 moves.
    mid = p;
    end = p;
    for (std::size_t i = 0; i < k1 * k2; ++i) {
      end.w1()[i] = q.w1()[i];
      mid.w1()[i] = Midpoint(p.w1()[i], q.w1()[i]);
    }
    EXPECT_GE(NestedQueryObjective(mid, d),
              Midpoint(NestedQueryObjective(p, d), NestedQueryObjective(end, d)) - 1e-12);
  }
}

TEST(NestedProperty, IdentityModelIsNotJointlyConcave) {
  // Moving both layers together: W2' W1 d is bilinear, so some segment bends up.
  std::mt19937_64 rng(55);
  bool violated = false;
  for (int trial = 0; trial < 500 && !violated; ++trial) {
    const NestedModel p = RandomModel(rng, 3, 3, Activation::kIdentity, Activation::kIdentity);
    const NestedModel q = RandomModel(rng, 3, 3, Activation::kIdentity, Activation::kIdentity);
    const std::vector<double> d = RandomScores(rng, 3, 0, 3);
    NestedModel mid = p;
    for (std::size_t i = 0; i < 9; ++i) mid.w1()[i] = Midpoint(p.w1()[i], q.w1()[i]);
    for (std::size_t i = 0; i < 3; ++i) mid.w2()[i] = Midpoint(p.w2()[i], q.w2()[i]);
    violated = NestedQueryObjective(mid, d) <
               Midpoint(NestedQueryObjective(p, d), NestedQueryObjective(q, d)) - 1e-9;
  }
  EXPECT_TRUE(violated);
}

}  // namespace
}  // namespace lbrank
