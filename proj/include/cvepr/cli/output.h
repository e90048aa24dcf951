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

#ifndef CVEPR_CLI_OUTPUT_H
#define CVEPR_CLI_OUTPUT_H

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cvepr/cli/config.h"

namespace cvepr::cli {

/// Bumped whenever a record's key set or meaning changes.
inline constexpr const char* kSchemaVersion = "cvepr/1";

using Value = std::variant<std::string, double, std::int64_t, bool>;

/// One output record: ordered key/value pairs. Every row starts with
/// schema_version and kind.
class Row {
 public:
  explicit Row(std::string kind);

  Row& set(std::string key, Value value);
  const std::vector<std::pair<std::string, Value>>& fields() const { return fields_; }
  /// Throws std::out_of_range for a missing key.
  const Value& at(const std::string& key) const;
  double number(const std::string& key) const;

 private:
  std::vector<std::pair<std::string, Value>> fields_;
};

/// JSON lines (full double precision) or CSV (12 significant digits). CSV
/// repeats the header whenever the key set changes between rows.
class RowWriter {
 public:
  RowWriter(std::ostream& out, Format format) : out_(out), format_(format) {}
  void write(const Row& row);
  void write(const std::vector<Row>& rows) {
    for (const auto& r : rows) write(r);
  }

 private:
  std::ostream& out_;
  Format format_;
  std::vector<std::string> header_;
};

}  // namespace cvepr::cli

#endif  // CVEPR_CLI_OUTPUT_H
