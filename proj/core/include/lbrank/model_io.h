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

// Versioned JSON model documents.
//
//   {"format_version": 1, "kind": "linear", "K": .., "g_spec": "sqrt",
//    "w": [..], "train_meta": {..}}
//   {"format_version": 1, "kind": "nested", "K1": .., "K2": .., "g_spec": ..,
//    "phi1": "log1p", "phi2": "log1p", "W1": [[..], ..], "W2": [..],
//    "train_meta": {..}}

#ifndef LBRANK_MODEL_IO_H_
#define LBRANK_MODEL_IO_H_

#include <filesystem>
#include <string>
#include <variant>

#include "lbrank/linear.h"
#include "lbrank/nested.h"

namespace lbrank {

inline constexpr int kModelFormatVersion = 1;

using AnyModel = std::variant<LinearModel, NestedModel>;

std::string SerializeModel(const LinearModel& model);
std::string SerializeModel(const NestedModel& model);
std::string SerializeModel(const AnyModel& model);

// Throws ParseError for malformed JSON or missing fields, ValidationError for
// weights off the simplex (1e-9 slack for hand-written files).
AnyModel ParseModel(const std::string& text);

void SaveModel(const AnyModel& model, const std::filesystem::path& path);
AnyModel LoadModel(const std::filesystem::path& path);

// Number of score lists the model consumes.
std::size_t ModelInputs(const AnyModel& model);
Aggregate InferModel(const AnyModel& model, std::span<const ScoreList> lists);

}  // namespace lbrank

#endif  // LBRANK_MODEL_IO_H_
