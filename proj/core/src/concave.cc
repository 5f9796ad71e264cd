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


#include "lbrank/concave.h"

#include <charconv>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>

#include "lbrank/errors.h"

namespace lbrank {
namespace {

double ParseNumber(std::string_view text, std::string_view what) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ValidationError("cannot parse " + std::string(what) + " '" +
                          std::string(text) + "'");
  }
  return value;
}

std::string FormatNumber(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void CheckDeltas(const std::vector<double>& deltas) {
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!std::isfinite(deltas[i]) || deltas[i] <= 0.0) {
      throw ValidationError("concave function first difference " +
                            std::to_string(i + 1) + " is not positive");
    }
    // A few ulps of slack: closed-form differences are not exactly monotone
    // in floating point for large arguments.
    if (i > 0 && deltas[i] > deltas[i - 1] * (1.0 + 1e-12)) {
      throw ValidationError("concave function first differences increase at " +
                            std::to_string(i + 1));
    }
  }
}

}  // namespace

ConcaveFunction ConcaveFunction::Power(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ValidationError("power exponent must lie in (0, 1), got " +
                          FormatNumber(alpha));
  }
  ConcaveFunction g(ConcaveKind::kPower);
  g.alpha_ = alpha;
  return g;
}

ConcaveFunction ConcaveFunction::Custom(std::vector<double> deltas) {
  if (deltas.empty()) throw ValidationError("custom concave table is empty");
  CheckDeltas(deltas);
  ConcaveFunction g(ConcaveKind::kCustom);
  g.table_ = std::move(deltas);
  return g;
}

ConcaveFunction ConcaveFunction::Parse(std::string_view text) {
  if (text == "sqrt") return Sqrt();
  if (text == "log1p") return Log1p();
  if (text == "linear") return Linear();
  if (text.starts_with("power:")) {
    return Power(ParseNumber(text.substr(6), "power exponent"));
  }
  if (text.starts_with("custom:")) {
    std::vector<double> deltas;
    std::string_view rest = text.substr(7);
    while (!rest.empty()) {
      std::size_t comma = rest.find(',');
      deltas.push_back(ParseNumber(rest.substr(0, comma), "custom delta"));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    return Custom(std::move(deltas));
  }
  throw ValidationError("unknown concave function '" + std::string(text) +
                        "' (expected sqrt, log1p, linear, power:<a>, custom:...)");
}

std::string ConcaveFunction::ToString() const {
  switch (kind_) {
    case ConcaveKind::kSqrt:
      return "sqrt";
    case ConcaveKind::kLog1p:
      return "log1p";
    case ConcaveKind::kLinear:
      return "linear";
    case ConcaveKind::kPower:
      return "power:" + FormatNumber(alpha_);
    case ConcaveKind::kCustom: {
      std::string out = "custom:";
      for (std::size_t i = 0; i < table_.size(); ++i) {
        if (i > 0) out += ',';
        out += FormatNumber(table_[i]);
      }
      return out;
    }
  }
  return "sqrt";
}

double ConcaveFunction::Value(std::size_t k) const {
  const double x = static_cast<double>(k);
  switch (kind_) {
    case ConcaveKind::kSqrt:
      return std::sqrt(x);
    case ConcaveKind::kLog1p:
      return std::log1p(x);
    case ConcaveKind::kLinear:
      return x;
    case ConcaveKind::kPower:
      return std::pow(x, alpha_);
    case ConcaveKind::kCustom: {
      if (k > table_.size()) {
        throw ValidationError("custom concave table has only " +
                              std::to_string(table_.size()) + " entries");
      }
      double sum = 0.0;
      for (std::size_t i = 0; i < k; ++i) sum += table_[i];
      return sum;
    }
  }
  return 0.0;
}

double ConcaveFunction::Delta(std::size_t k) const {
  if (k == 0) throw ValidationError("first differences start at 1");
  const double x = static_cast<double>(k);
  switch (kind_) {
    case ConcaveKind::kSqrt:
      // sqrt(k) - sqrt(k-1) without cancellation.
      return 1.0 / (std::sqrt(x) + std::sqrt(x - 1.0));
    case ConcaveKind::kLog1p:
      // log(1+k) - log(k) = log1p(1/k).
      return std::log1p(1.0 / x);
    case ConcaveKind::kLinear:
      return 1.0;
    case ConcaveKind::kPower:
      return std::pow(x, alpha_) - std::pow(x - 1.0, alpha_);
    case ConcaveKind::kCustom:
      if (k > table_.size()) {
        throw ValidationError("custom concave table has only " +
                              std::to_string(table_.size()) + " entries");
      }
      return table_[k - 1];
  }
  return 0.0;
}

ConcaveSpec::ConcaveSpec(const ConcaveFunction& g, std::size_t n) : function_(g) {
  if (n == 0) throw ValidationError("concave spec needs at least one candidate");
  if (g.kind() == ConcaveKind::kCustom && g.table_size() != n) {
    throw ValidationError("custom concave table has " +
                          std::to_string(g.table_size()) +
                          " entries but the ground set has " + std::to_string(n));
  }
  deltas_.resize(n);
  for (std::size_t i = 0; i < n; ++i) deltas_[i] = g.Delta(i + 1);
  CheckDeltas(deltas_);
}

double ConcaveSpec::g(std::size_t k) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < k && i < deltas_.size(); ++i) sum += deltas_[i];
  return sum;
}

}  // namespace lbrank
