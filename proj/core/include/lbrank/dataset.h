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

#ifndef LBRANK_DATASET_H_
#define LBRANK_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lbrank/metrics.h"
#include "lbrank/ranking.h"

namespace lbrank {

// One query: K score lists over the same N candidates plus the ground truth.
struct QueryRecord {
  std::string id;
  std::vector<ScoreList> lists;
  Ranking truth;
  std::optional<RelevanceGrades> grades;

  std::size_t num_candidates() const { return truth.size(); }
  std::size_t num_lists() const { return lists.size(); }

  // Grades if present, otherwise RelevanceGrades::FromTruth(truth).
  RelevanceGrades EffectiveGrades() const;

  // Throws ValidationError naming the record id.
  void Validate() const;

  friend bool operator==(const QueryRecord&, const QueryRecord&) = default;
};

struct DatasetMeta {
  std::size_t num_candidates = 0;
  std::size_t num_lists = 0;
  std::string name;
  std::uint64_t seed = 0;
  // Free-form generator parameters, kept as a compact JSON object text.
  std::string generator_params = "{}";

  friend bool operator==(const DatasetMeta&, const DatasetMeta&) = default;
};

struct Dataset {
  DatasetMeta meta;
  std::vector<QueryRecord> records;

  // Every record valid, shares meta's N and K, and ids are unique.
  void Validate() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

// JSON Lines: a header line {"meta": {...}} followed by one record per line
//   {"id": ..., "truth": [...], "grades": [...]?, "lists": [[...], ...]}.
// Doubles are written in shortest round-trip form.
std::string SerializeDataset(const Dataset& data);
// Throws ParseError (with the 1-based line) or ValidationError.
Dataset ParseDataset(const std::string& text);

void SaveDataset(const Dataset& data, const std::filesystem::path& path);
Dataset LoadDataset(const std::filesystem::path& path);

// Checks that every record in `records` has K lists of length N.
void CheckUniformShape(std::span<const QueryRecord> records);

}  // namespace lbrank

#endif  // LBRANK_DATASET_H_
