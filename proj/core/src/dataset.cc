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


#include "lbrank/dataset.h"

#include <set>
#include <string>
#include <utility>

#include "json.hpp"
#include "lbrank/errors.h"
#include "lbrank/io.h"

namespace lbrank {

using nlohmann::ordered_json;
// Ordered on both sides so save -> load -> save keeps key order.
using json = nlohmann::ordered_json;

RelevanceGrades QueryRecord::EffectiveGrades() const {
  return grades ? *grades : RelevanceGrades::FromTruth(truth);
}

void QueryRecord::Validate() const {
  const std::string where = "record '" + id + "': ";
  if (id.empty()) throw ValidationError("record with empty id");
  if (lists.empty()) throw ValidationError(where + "no score lists");
  if (truth.size() == 0) throw ValidationError(where + "empty truth ranking");
  for (std::size_t k = 0; k < lists.size(); ++k) {
    if (lists[k].size() != truth.size()) {
      throw ValidationError(where + "list " + std::to_string(k) + " has " +
                            std::to_string(lists[k].size()) +
                            " scores, truth ranks " +
                            std::to_string(truth.size()) + " candidates");
    }
  }
  if (grades) {
    if (grades->size() != truth.size()) {
      throw ValidationError(where + "grades length differs from N");
    }
    for (std::size_t p = 1; p < truth.size(); ++p) {
      if ((*grades)[truth[p]] > (*grades)[truth[p - 1]]) {
        throw ValidationError(where + "truth does not order the grades");
      }
    }
  }
}

void Dataset::Validate() const {
  std::set<std::string> ids;
  for (const QueryRecord& r : records) {
    r.Validate();
    if (r.num_candidates() != meta.num_candidates) {
      throw ValidationError("record '" + r.id + "': N = " +
                            std::to_string(r.num_candidates()) +
                            " but the dataset declares N = " +
                            std::to_string(meta.num_candidates));
    }
    if (r.num_lists() != meta.num_lists) {
      throw ValidationError("record '" + r.id + "': K = " +
                            std::to_string(r.num_lists()) +
                            " but the dataset declares K = " +
                            std::to_string(meta.num_lists));
    }
    if (!ids.insert(r.id).second) {
      throw ValidationError("duplicate record id '" + r.id + "'");
    }
  }
}

void CheckUniformShape(std::span<const QueryRecord> records) {
  if (records.empty()) throw ValidationError("no query records");
  const std::size_t n = records.front().num_candidates();
  const std::size_t k = records.front().num_lists();
  for (const QueryRecord& r : records) {
    r.Validate();
    if (r.num_candidates() != n || r.num_lists() != k) {
      throw ValidationError("record '" + r.id + "' has shape N=" +
                            std::to_string(r.num_candidates()) + ", K=" +
                            std::to_string(r.num_lists()) + "; expected N=" +
                            std::to_string(n) + ", K=" + std::to_string(k));
    }
  }
}

std::string SerializeDataset(const Dataset& data) {
  std::string out;
  ordered_json meta;
  meta["N"] = data.meta.num_candidates;
  meta["K"] = data.meta.num_lists;
  meta["name"] = data.meta.name;
  meta["seed"] = data.meta.seed;
  meta["generator_params"] = ordered_json::parse(data.meta.generator_params);
  ordered_json header;
  header["meta"] = std::move(meta);
  out += header.dump();
  out += '\n';
  for (const QueryRecord& r : data.records) {
    ordered_json line;
    line["id"] = r.id;
    line["truth"] = std::vector<std::size_t>(r.truth.order().begin(), r.truth.order().end());
    if (r.grades) {
      line["grades"] = std::vector<double>(r.grades->values().begin(), r.grades->values().end());
    }
    ordered_json lists = ordered_json::array();
    for (const ScoreList& x : r.lists) {
      lists.push_back(std::vector<double>(x.values().begin(), x.values().end()));
    }
    line["lists"] = std::move(lists);
    out += line.dump();
    out += '\n';
  }
  return out;
}

namespace {

template <typename T>
T Field(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(std::string("missing field '") + key + "'", line);
  }
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string("field '") + key + "' has the wrong type", line);
  }
}

QueryRecord ParseRecord(const json& j, std::size_t line) {
  if (!j.is_object()) throw ParseError("record is not a JSON object", line);
  QueryRecord r;
  r.id = Field<std::string>(j, "id", line);
  try {
    r.truth = Ranking(Field<std::vector<std::size_t>>(j, "truth", line));
    for (auto& scores : Field<std::vector<std::vector<double>>>(j, "lists", line)) {
      r.lists.emplace_back(std::move(scores));
    }
    if (auto it = j.find("grades"); it != j.end() && !it->is_null()) {
      r.grades = RelevanceGrades(Field<std::vector<double>>(j, "grades", line));
    }
  } catch (const ValidationError& e) {
    throw ValidationError("record '" + r.id + "' (line " + std::to_string(line) +
                          "): " + e.what());
  }
  return r;
}

}  // namespace

Dataset ParseDataset(const std::string& text) {
  Dataset data;
  bool have_header = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what(), line_no);
    }
    if (!have_header) {
      if (!j.is_object() || !j.contains("meta") || !j["meta"].is_object()) {
        throw ParseError("first line must be the {\"meta\": {...}} header", line_no);
      }
      const json& meta = j["meta"];
      data.meta.num_candidates = Field<std::size_t>(meta, "N", line_no);
      data.meta.num_lists = Field<std::size_t>(meta, "K", line_no);
      data.meta.name = Field<std::string>(meta, "name", line_no);
      data.meta.seed = Field<std::uint64_t>(meta, "seed", line_no);
      if (auto it = meta.find("generator_params"); it != meta.end()) {
        data.meta.generator_params = it->dump();
      }
      have_header = true;
      continue;
    }
    data.records.push_back(ParseRecord(j, line_no));
  }
  if (!have_header) throw ParseError("dataset has no header line", 0);
  data.Validate();
  return data;
}

void SaveDataset(const Dataset& data, const std::filesystem::path& path) {
  data.Validate();
  WriteFileAtomic(path, SerializeDataset(data));
}

Dataset LoadDataset(const std::filesystem::path& path) {
  return ParseDataset(ReadFile(path));
}

}  // namespace lbrank
