/**
 * Copyright 2026 The Morpho Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace morpho::cli {

/// Failure that maps to a nonzero exit status. `code` is a stable machine-readable tag.
class CliError : public std::runtime_error {
 public:
  CliError(std::string code, const std::string& message) : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// Minimal comma-separated table: one header line, no quoting.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of `name` in the header, or -1.
  int find(const std::string& name) const;
  /// Like find(), but throws a SchemaMismatch CliError naming the missing column.
  std::size_t require(const std::string& name, const std::string& source) const;
};

CsvTable read_csv(const std::filesystem::path& path);

/// Parses a finite double; empty or malformed cells throw CliError.
double parse_number(const std::string& cell, const std::string& context);

std::vector<std::string> split(const std::string& text, char sep);

}  // namespace morpho::cli
