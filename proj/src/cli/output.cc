// Copyright 2026 The cvepr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cvepr/cli/output.h"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace cvepr::cli {

namespace {

std::string csv_cell(const Value& v) {
  std::ostringstream s;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, bool>) {
          s << (x ? "true" : "false");
        } else if constexpr (std::is_same_v<T, double>) {
          s << std::setprecision(12) << x;
        } else if constexpr (std::is_same_v<T, std::string>) {
          if (x.find_first_of(",\"\n") == std::string::npos) {
            s << x;
          } else {
            s << '"';
            for (char ch : x) s << (ch == '"' ? "\"\"" : std::string(1, ch));
            s << '"';
          }
        } else {
          s << x;
        }
      },
      v);
  return s.str();
}

}  // namespace

Row::Row(std::string kind) {
  set("schema_version", std::string(kSchemaVersion));
  set("kind", std::move(kind));
}

Row& Row::set(std::string key, Value value) {
  for (auto& [k, v] : fields_) {
    if (k == key) {
      v = std::move(value);
      return *this;
    }
  }
  fields_.emplace_back(std::move(key), std::move(value));
  return *this;
}

const Value& Row::at(const std::string& key) const {
  for (const auto& [k, v] : fields_) {
    if (k == key) return v;
  }
  throw std::out_of_range("row has no field '" + key + "'");
}

double Row::number(const std::string& key) const {
  const auto& v = at(key);
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  throw std::invalid_argument("field '" + key + "' is not numeric");
}

void RowWriter::write(const Row& row) {
  if (format_ == Format::Json) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, v] : row.fields()) {
      std::visit(
          [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            // JSON has no NaN/inf; emit null rather than invalid text.
            if constexpr (std::is_same_v<T, double>) {
              if (std::isfinite(x)) {
                j[k] = x;
              } else {
                j[k] = nullptr;
              }
            } else {
              j[k] = x;
            }
          },
          v);
    }
    out_ << j.dump() << '\n';
    return;
  }
  std::vector<std::string> keys;
  for (const auto& [k, _] : row.fields()) keys.push_back(k);
  if (keys != header_) {
    header_ = keys;
    for (std::size_t i = 0; i < keys.size(); ++i) out_ << (i ? "," : "") << keys[i];
    out_ << '\n';
  }
  for (std::size_t i = 0; i < row.fields().size(); ++i) {
    out_ << (i ? "," : "") << csv_cell(row.fields()[i].second);
  }
  out_ << '\n';
}

}  // namespace cvepr::cli
