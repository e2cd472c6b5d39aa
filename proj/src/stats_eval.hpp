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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"

namespace morpho {

/// N rows by D named real-valued columns, row-major.
struct AttributeTable {
  std::vector<std::string> names;
  std::vector<double> values;

  std::size_t cols() const noexcept { return names.size(); }
  std::size_t rows() const noexcept { return names.empty() ? 0 : values.size() / names.size(); }
  double at(std::size_t row, std::size_t col) const noexcept { return values[row * cols() + col]; }
  std::vector<double> column(std::size_t col) const;

  /// Throws InvalidArgument unless the table is non-empty, rectangular and NaN-free.
  void validate(std::size_t min_rows = 1) const;
};

enum class CodeType : int { Continuous = 0, Categorical = 1, Binary = 2 };

struct CodeColumn {
  std::string name;
  CodeType type = CodeType::Continuous;
  int categories = 0;  // categorical only
  std::vector<double> values;
};

struct CodeTable {
  std::vector<CodeColumn> columns;

  std::size_t rows() const noexcept { return columns.empty() ? 0 : columns.front().values.size(); }
  void validate() const;
};

struct MMDTestResult {
  double statistic = 0.0;  // MMD^2 linear-time estimate
  double std_error = 0.0;
  double p_value = 1.0;    // one-sided, normal approximation
  std::vector<double> bandwidths;  // per dimension, combined kernel
  std::size_t n = 0;       // samples used from each side
};

/// Scott's rule: N^(-1/(D+4)) times the sample standard deviation of each column.
std::vector<double> scott_bandwidths(const AttributeTable& table);

/// Linear-time MMD two-sample test with a Gaussian product kernel whose squared
/// bandwidths are the sums of the two tables' squared Scott bandwidths.
MMDTestResult mmd_linear_test(const AttributeTable& x, const AttributeTable& y);

/// Codes with categorical columns replaced by one-hot dummies.
struct ExpandedCodes {
  std::vector<std::string> names;
  std::vector<std::size_t> source;  // originating code column per expanded column
  std::vector<int> level;           // category for dummies, -1 otherwise
  std::vector<double> values;       // rows x names.size(), row-major

  std::size_t cols() const noexcept { return names.size(); }
  std::size_t rows() const noexcept { return names.empty() ? 0 : values.size() / names.size(); }
};

ExpandedCodes dummy_expand(const CodeTable& codes);

struct PartialCorrTable {
  std::vector<std::string> attributes;
  std::vector<std::string> codes;  // expanded names
  std::vector<double> values;      // attributes x codes, row-major

  double at(std::size_t attribute, std::size_t code) const noexcept { return values[attribute * codes.size() + code]; }
};

/// Partial correlation of each attribute with each expanded code given the other codes.
/// A dummy is controlled for every other code but not its siblings; other categorical
/// codes enter the control set as their first K-1 dummies.
PartialCorrTable partial_correlations(const AttributeTable& attributes, const CodeTable& codes);

struct MIGReport {
  std::vector<std::string> attributes;
  std::vector<std::string> codes;
  std::vector<double> per_attribute;
  double overall = 0.0;
  std::vector<double> mutual_information;  // attributes x codes, nats
  std::vector<double> entropy;             // per attribute, nats
  int bins = 0;
};

/// Equal-frequency discretisation; tied values always share a bin.
std::vector<int> equal_frequency_bins(std::span<const double> values, int bins);

MIGReport mig(const AttributeTable& attributes, const CodeTable& codes, int bins = 20);

}  // namespace morpho
