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


#include "lbrank/model_io.h"

#include <string>
#include <utility>

#include "json.hpp"
#include "lbrank/errors.h"
#include "lbrank/io.h"

namespace lbrank {

using json = nlohmann::ordered_json;

namespace {

constexpr double kLoadSimplexTolerance = 1e-9;

template <typename T>
T Field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string("model: missing field '") + key + "'", 0);
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string("model: field '") + key + "' has the wrong type", 0);
  }
}

json LinearMetaJson(const LinearTrainMeta& m) {
  json j;
  j["lambda"] = m.lambda;
  j["mu"] = m.mu;
  j["epochs"] = m.epochs;
  j["epochs_run"] = m.epochs_run;
  j["batch"] = std::string(ToString(m.batch));
  j["seed"] = m.seed;
  j["tol"] = m.tol;
  j["final_objective"] = m.final_objective;
  return j;
}

json NestedMetaJson(const NestedTrainMeta& m) {
  json j;
  j["lambda1"] = m.lambda1;
  j["lambda2"] = m.lambda2;
  j["mu"] = m.mu;
  j["epochs"] = m.epochs;
  j["epochs_run"] = m.epochs_run;
  j["batch"] = std::string(ToString(m.batch));
  j["seed"] = m.seed;
  j["tol"] = m.tol;
  j["gradient_mode"] = std::string(ToString(m.gradient_mode));
  j["objective_sense"] = std::string(ToString(m.sense));
  j["final_objective"] = m.final_objective;
  return j;
}

LinearModel ParseLinear(const json& j) {
  LinearModel model;
  const auto k = Field<std::size_t>(j, "K");
  model.g = ConcaveFunction::Parse(Field<std::string>(j, "g_spec"));
  model.weights = Field<std::vector<double>>(j, "w");
  if (model.weights.size() != k) {
    throw ValidationError("model: K = " + std::to_string(k) + " but w has " +
                          std::to_string(model.weights.size()) + " entries");
  }
  const json meta = j.value("train_meta", json::object());
  model.meta.lambda = meta.value("lambda", 0.0);
  model.meta.mu = meta.value("mu", 0.0);
  model.meta.epochs = meta.value("epochs", 0);
  model.meta.epochs_run = meta.value("epochs_run", 0);
  model.meta.batch = ParseBatchMode(meta.value("batch", std::string("per-query")));
  model.meta.seed = meta.value("seed", std::uint64_t{0});
  model.meta.tol = meta.value("tol", 0.0);
  model.meta.final_objective = meta.value("final_objective", 0.0);
  model.Validate(kLoadSimplexTolerance);
  return model;
}

NestedModel ParseNested(const json& j) {
  const auto k1 = Field<std::size_t>(j, "K1");
  const auto k2 = Field<std::size_t>(j, "K2");
  NestedModel model(k1, k2, ParseActivation(Field<std::string>(j, "phi1")),
                    ParseActivation(Field<std::string>(j, "phi2")),
                    ConcaveFunction::Parse(Field<std::string>(j, "g_spec")));
  const auto w1 = Field<std::vector<std::vector<double>>>(j, "W1");
  const auto w2 = Field<std::vector<double>>(j, "W2");
  if (w1.size() != k2 || w2.size() != k2) {
    throw ValidationError("model: W1 must have K2 rows and W2 K2 entries");
  }
  for (std::size_t i = 0; i < k2; ++i) {
    if (w1[i].size() != k1) {
      throw ValidationError("model: W1 row " + std::to_string(i) +
                            " must have K1 entries");
    }
    std::copy(w1[i].begin(), w1[i].end(), model.w1_row(i).begin());
  }
  std::copy(w2.begin(), w2.end(), model.w2().begin());
  const json meta = j.value("train_meta", json::object());
  model.meta.lambda1 = meta.value("lambda1", 0.0);
  model.meta.lambda2 = meta.value("lambda2", 0.0);
  model.meta.mu = meta.value("mu", 0.0);
  model.meta.epochs = meta.value("epochs", 0);
  model.meta.epochs_run = meta.value("epochs_run", 0);
  model.meta.batch = ParseBatchMode(meta.value("batch", std::string("per-query")));
  model.meta.seed = meta.value("seed", std::uint64_t{0});
  model.meta.tol = meta.value("tol", 0.0);
  model.meta.gradient_mode =
      ParseGradientMode(meta.value("gradient_mode", std::string("analytic")));
  model.meta.sense =
      ParseObjectiveSense(meta.value("objective_sense", std::string("paper_descent")));
  model.meta.final_objective = meta.value("final_objective", 0.0);
  model.Validate(kLoadSimplexTolerance);
  return model;
}

}  // namespace

std::string SerializeModel(const LinearModel& model) {
  json j;
  j["format_version"] = kModelFormatVersion;
  j["kind"] = "linear";
  j["K"] = model.weights.size();
  j["g_spec"] = model.g.ToString();
  j["w"] = model.weights;
  j["train_meta"] = LinearMetaJson(model.meta);
  return j.dump(2) + "\n";
}

std::string SerializeModel(const NestedModel& model) {
  json j;
  j["format_version"] = kModelFormatVersion;
  j["kind"] = "nested";
  j["K1"] = model.inputs();
  j["K2"] = model.hidden();
  j["g_spec"] = model.g.ToString();
  j["phi1"] = std::string(ToString(model.phi1));
  j["phi2"] = std::string(ToString(model.phi2));
  json w1 = json::array();
  for (std::size_t i = 0; i < model.hidden(); ++i) {
    const auto row = model.w1_row(i);
    w1.push_back(std::vector<double>(row.begin(), row.end()));
  }
  j["W1"] = std::move(w1);
  j["W2"] = std::vector<double>(model.w2().begin(), model.w2().end());
  j["train_meta"] = NestedMetaJson(model.meta);
  return j.dump(2) + "\n";
}

std::string SerializeModel(const AnyModel& model) {
  return std::visit([](const auto& m) { return SerializeModel(m); }, model);
}

AnyModel ParseModel(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model: malformed JSON: ") + e.what(), 0);
  }
  if (!j.is_object()) throw ParseError("model: document is not a JSON object", 0);
  const int version = Field<int>(j, "format_version");
  if (version != kModelFormatVersion) {
    throw ParseError("model: unsupported format_version " + std::to_string(version), 0);
  }
  const std::string kind = Field<std::string>(j, "kind");
  try {
    if (kind == "linear") return ParseLinear(j);
    if (kind == "nested") return ParseNested(j);
  } catch (const json::exception& e) {
    throw ParseError(std::string("model: ") + e.what(), 0);
  }
  throw ParseError("model: unknown kind '" + kind + "'", 0);
}

void SaveModel(const AnyModel& model, const std::filesystem::path& path) {
  WriteFileAtomic(path, SerializeModel(model));
}

AnyModel LoadModel(const std::filesystem::path& path) {
  return ParseModel(ReadFile(path));
}

std::size_t ModelInputs(const AnyModel& model) {
  if (const auto* linear = std::get_if<LinearModel>(&model)) return linear->num_lists();
  return std::get<NestedModel>(model).inputs();
}

Aggregate InferModel(const AnyModel& model, std::span<const ScoreList> lists) {
  if (const auto* linear = std::get_if<LinearModel>(&model)) {
    return InferLinear(*linear, lists);
  }
  return InferNested(std::get<NestedModel>(model), lists);
}

}  // namespace lbrank
