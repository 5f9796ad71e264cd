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

// Nested aggregation: a two-layer concave model over the per-list
// divergences of a query,
//
//   J(W1, W2) = (1/|Q|) sum_q phi2( sum_i W2(i) phi1( sum_j W1(i,j) d_j^q ) )
//               + (lambda1/2) |W1|_F^2 + (lambda2/2) |W2|^2,
//
// with each row of W1 and the vector W2 on a simplex. Training applies
// exponentiated updates layer by layer: W1 first, then W2 against the
// re-propagated hidden layer. Inference pushes the raw scores of each
// candidate through the same two layers and sorts the result.

#ifndef LBRANK_NESTED_H_
#define LBRANK_NESTED_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lbrank/concave.h"
#include "lbrank/dataset.h"
#include "lbrank/training.h"

namespace lbrank {

// Increasing concave maps with value 0 at 0.
enum class Activation {
  kLog1p,     // ln(1 + z)
  kSqrt1p,    // sqrt(1 + z) - 1
  kIdentity,  // z
};

std::string_view ToString(Activation a);
Activation ParseActivation(std::string_view text);
double ActivationValue(Activation a, double z);
double ActivationDerivative(Activation a, double z);
// Smallest admissible input (-1 for log1p and sqrt1p, -inf for identity).
double ActivationDomainMin(Activation a);

enum class GradientMode {
  // Chain-rule partials of the per-query objective.
  kAnalytic,
  // The bottom-layer gradient as commonly printed:
  //   phi1'(h_i) * sum_j d_j + lambda1 W1(i,j).
  kPaperLiteral,
};

std::string_view ToString(GradientMode m);
GradientMode ParseGradientMode(std::string_view text);

enum class ObjectiveSense {
  // w <- w exp(-mu grad): drives the divergence-weighted objective down.
  kPaperDescent,
  // w <- w exp(+mu grad).
  kAscent,
};

std::string_view ToString(ObjectiveSense s);
ObjectiveSense ParseObjectiveSense(std::string_view text);

struct NestedConfig : TrainConfig {
  std::size_t hidden = 3;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  Activation phi1 = Activation::kLog1p;
  Activation phi2 = Activation::kLog1p;
  GradientMode gradient_mode = GradientMode::kAnalytic;
  ObjectiveSense sense = ObjectiveSense::kPaperDescent;

  void Validate() const;
};

struct NestedTrainMeta {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double mu = 0.0;
  int epochs = 0;
  int epochs_run = 0;
  BatchMode batch = BatchMode::kPerQuery;
  std::uint64_t seed = 0;
  double tol = 0.0;
  GradientMode gradient_mode = GradientMode::kAnalytic;
  ObjectiveSense sense = ObjectiveSense::kPaperDescent;
  double final_objective = 0.0;
};

class NestedModel {
 public:
  NestedModel() = default;
  // Uniform rows and uniform W2.
  NestedModel(std::size_t inputs, std::size_t hidden, Activation phi1,
              Activation phi2, ConcaveFunction g);

  std::size_t inputs() const { return inputs_; }
  std::size_t hidden() const { return hidden_; }

  // W1 is hidden x inputs, row-major.
  std::span<double> w1() { return w1_; }
  std::span<const double> w1() const { return w1_; }
  std::span<double> w1_row(std::size_t i) {
    return std::span<double>(w1_).subspan(i * inputs_, inputs_);
  }
  std::span<const double> w1_row(std::size_t i) const {
    return std::span<const double>(w1_).subspan(i * inputs_, inputs_);
  }
  double w1(std::size_t i, std::size_t j) const { return w1_[i * inputs_ + j]; }
  std::span<double> w2() { return w2_; }
  std::span<const double> w2() const { return w2_; }

  Activation phi1 = Activation::kLog1p;
  Activation phi2 = Activation::kLog1p;
  ConcaveFunction g;
  NestedTrainMeta meta;

  // Throws ValidationError unless every weight group is on the simplex.
  void Validate(double tolerance = 1e-12) const;

 private:
  std::size_t inputs_ = 0;
  std::size_t hidden_ = 0;
  std::vector<double> w1_;
  std::vector<double> w2_;
};

struct NestedForward {
  // W1 d, one entry per hidden unit.
  std::vector<double> hidden;
  // W2 . phi1(hidden).
  double output = 0.0;
};

NestedForward NestedForwardPass(const NestedModel& model,
                                std::span<const double> divergences);

// Uses model.meta.lambda1 and model.meta.lambda2.
double NestedObjective(const NestedModel& model, const DivergenceTable& d);
double NestedObjective(const NestedModel& model,
                       std::span<const QueryRecord> data);

// phi2(output) + (lambda1/2)|W1|^2 + (lambda2/2)|W2|^2 for one query.
double NestedQueryObjective(const NestedModel& model,
                            std::span<const double> divergences);

struct NestedGradients {
  std::vector<double> w1;  // hidden x inputs, row-major
  std::vector<double> w2;
};

// Both gradients from one forward pass; lambdas from model.meta.
NestedGradients ComputeNestedGradients(const NestedModel& model,
                                       std::span<const double> divergences,
                                       GradientMode mode);
NestedGradients ComputeNestedGradients(const NestedModel& model,
                                       const QueryRecord& record,
                                       GradientMode mode);

// One pass over `order`; per query: forward, update W1, forward again,
// update W2. Allocation-free after the first call on a given shape.
void RunNestedEpoch(NestedModel& model, const DivergenceTable& d,
                    const NestedConfig& cfg, std::span<const std::size_t> order,
                    const TrainHooks& hooks = {});

NestedModel TrainNested(std::span<const QueryRecord> data,
                        const ConcaveFunction& g, const NestedConfig& cfg,
                        const TrainHooks& hooks = {});

// Sorts phi2(sum_i W2(i) phi1(sum_j W1(i,j) x_j)). If any hidden input falls
// below phi1's domain, all hidden inputs are shifted up by the same amount.
Aggregate InferNested(const NestedModel& model, std::span<const ScoreList> lists);

}  // namespace lbrank

#endif  // LBRANK_NESTED_H_
