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


#include "lbrank/synth.h"

#include <charconv>
#include <cmath>
#include <random>
#include <string>
#include <utility>

#include "json.hpp"
#include "lbrank/errors.h"

namespace lbrank {

void ScorerProfile::Validate() const {
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw ValidationError("scorer noise_sigma must be non-negative");
  }
  if (!std::isfinite(bias)) throw ValidationError("scorer bias must be finite");
  if (!(corruption_rate >= 0.0 && corruption_rate <= 1.0)) {
    throw ValidationError("scorer corruption_rate must lie in [0, 1]");
  }
}

namespace {

double ParseDouble(std::string_view text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ValidationError("cannot parse number '" + std::string(text) +
                          "' in scorer profile");
  }
  return v;
}

std::vector<std::string_view> Split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  while (true) {
    const std::size_t at = text.find(sep);
    parts.push_back(text.substr(0, at));
    if (at == std::string_view::npos) break;
    text.remove_prefix(at + 1);
  }
  return parts;
}

}  // namespace

std::vector<ScorerProfile> ParseProfiles(std::string_view spec, std::size_t k) {
  std::vector<ScorerProfile> profiles(k);
  if (spec == "clean") return profiles;
  if (spec.starts_with("uniform:")) {
    const double sigma = ParseDouble(spec.substr(8));
    for (auto& p : profiles) p.noise_sigma = sigma;
  } else if (spec == "hetero") {
    // Noise from 0.008 to 0.016, every third scorer occasionally corrupted,
    // small alternating biases.
    for (std::size_t i = 0; i < k; ++i) {
      const double t = k > 1 ? static_cast<double>(i) / static_cast<double>(k - 1) : 0.0;
      profiles[i].noise_sigma = 0.008 + 0.008 * t;
      profiles[i].corruption_rate = i % 3 == 2 ? 0.05 : 0.0;
      profiles[i].bias = i % 2 == 0 ? 0.02 : -0.02;
    }
  } else if (spec == "one-perfect") {
    for (std::size_t i = 1; i < k; ++i) profiles[i].corruption_rate = 1.0;
  } else if (spec.starts_with("list:")) {
    const auto entries = Split(spec.substr(5), ',');
    if (entries.size() != k) {
      throw ValidationError("profile list has " + std::to_string(entries.size()) +
                            " entries for K = " + std::to_string(k));
    }
    for (std::size_t i = 0; i < k; ++i) {
      const auto fields = Split(entries[i], '/');
      if (fields.size() != 3) {
        throw ValidationError("profile entry '" + std::string(entries[i]) +
                              "' must be sigma/bias/corruption");
      }
      profiles[i].noise_sigma = ParseDouble(fields[0]);
      profiles[i].bias = ParseDouble(fields[1]);
      profiles[i].corruption_rate = ParseDouble(fields[2]);
    }
  } else {
    throw ValidationError("unknown scorer profile '" + std::string(spec) +
                          "' (expected clean, uniform:<s>, hetero, one-perfect, "
                          "list:...)");
  }
  for (const auto& p : profiles) p.Validate();
  return profiles;
}

SyntheticData GenerateSyntheticWithLatents(const GeneratorParams& params) {
  const std::size_t n = params.num_candidates;
  const std::size_t k = params.num_lists;
  if (n < 2) throw ValidationError("synthetic data needs N >= 2");
  if (k < 1) throw ValidationError("synthetic data needs K >= 1");
  if (params.num_queries < 1) throw ValidationError("synthetic data needs at least one query");
  if (params.profiles.size() != k) {
    throw ValidationError("expected " + std::to_string(k) + " scorer profiles, got " +
                          std::to_string(params.profiles.size()));
  }
  for (const auto& p : params.profiles) p.Validate();
  if (params.softmax && !(params.softmax_temperature > 0.0)) {
    throw ValidationError("softmax temperature must be positive");
  }

  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  SyntheticData out;
  Dataset& data = out.dataset;
  data.meta.num_candidates = n;
  data.meta.num_lists = k;
  data.meta.name = params.name;
  data.meta.seed = params.seed;
  nlohmann::ordered_json gp;
  gp["queries"] = params.num_queries;
  gp["latent"] = "uniform01";
  gp["profile_spec"] = params.profile_spec;
  nlohmann::ordered_json scorers = nlohmann::ordered_json::array();
  for (const auto& p : params.profiles) {
    scorers.push_back({{"noise_sigma", p.noise_sigma},
                       {"bias", p.bias},
                       {"corruption_rate", p.corruption_rate}});
  }
  gp["scorers"] = std::move(scorers);
  gp["softmax"] = params.softmax;
  if (params.softmax) gp["softmax_temperature"] = params.softmax_temperature;
  data.meta.generator_params = gp.dump();

  data.records.reserve(params.num_queries);
  out.latents.reserve(params.num_queries);
  std::vector<double> scores(n);
  for (std::size_t q = 0; q < params.num_queries; ++q) {
    std::vector<double> latent(n);
    for (double& v : latent) v = unit(rng);
    QueryRecord record;
    record.id = "q" + std::to_string(q);
    record.truth = RankFromScores(latent);
    for (std::size_t s = 0; s < k; ++s) {
      const ScorerProfile& p = params.profiles[s];
      for (std::size_t c = 0; c < n; ++c) {
        if (p.corruption_rate > 0.0 && unit(rng) < p.corruption_rate) {
          scores[c] = unit(rng) + p.bias;
        } else {
          scores[c] = latent[c] + p.bias +
                      (p.noise_sigma > 0.0 ? p.noise_sigma * normal(rng) : 0.0);
        }
      }
      if (params.softmax) {
        double top = scores[0];
        for (double v : scores) top = std::max(top, v);
        double total = 0.0;
        for (double& v : scores) {
          v = std::exp((v - top) / params.softmax_temperature);
          total += v;
        }
        for (double& v : scores) v /= total;
      }
      record.lists.emplace_back(scores);
    }
    data.records.push_back(std::move(record));
    out.latents.push_back(std::move(latent));
  }
  return out;
}

Dataset GenerateSynthetic(const GeneratorParams& params) {
  return GenerateSyntheticWithLatents(params).dataset;
}

}  // namespace lbrank
