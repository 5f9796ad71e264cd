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

// Synthetic "distributed scorers" data: each query has latent true scores
// over N candidates, and K scorers report noisy, biased, occasionally
// corrupted copies of them.

#ifndef LBRANK_SYNTH_H_
#define LBRANK_SYNTH_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lbrank/dataset.h"

namespace lbrank {

struct ScorerProfile {
  double noise_sigma = 0.0;
  double bias = 0.0;
  // Probability that a candidate's score is replaced by an independent draw.
  double corruption_rate = 0.0;

  void Validate() const;
};

// Profile presets, K entries each:
//   "clean"            noiseless scorers
//   "uniform:<sigma>"  identical Gaussian noise
//   "hetero"           a spread of noise levels and corruption rates
//   "one-perfect"      scorer 0 noiseless, every other scorer pure noise
//   "list:<s>/<b>/<c>,..."  explicit sigma/bias/corruption per scorer
std::vector<ScorerProfile> ParseProfiles(std::string_view spec, std::size_t k);

struct GeneratorParams {
  std::size_t num_candidates = 50;
  std::size_t num_lists = 8;
  std::size_t num_queries = 100;
  std::vector<ScorerProfile> profiles;
  std::uint64_t seed = 0;
  // Replace each emitted list by its softmax (posterior-like, sums to one).
  bool softmax = false;
  // Softmax temperature applied to the raw scores.
  double softmax_temperature = 0.1;
  std::string name = "synthetic";
  // Free-text description of the profiles, stored in the dataset header.
  std::string profile_spec;
};

struct SyntheticData {
  Dataset dataset;
  // Latent true scores per query.
  std::vector<std::vector<double>> latents;
};

// Deterministic in params (including seed). Throws ValidationError for
// N < 2, K < 1, zero queries, or a profile count different from K.
SyntheticData GenerateSyntheticWithLatents(const GeneratorParams& params);
Dataset GenerateSynthetic(const GeneratorParams& params);

}  // namespace lbrank

#endif  // LBRANK_SYNTH_H_
