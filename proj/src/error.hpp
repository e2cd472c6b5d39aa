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

#include <stdexcept>
#include <string>

namespace morpho {

// Values are part of the C ABI (see morpho.h); append only.
enum class ErrorCode : int {
  Ok = 0,
  InvalidArgument = 1,
  IoError = 2,
  BadMagic = 3,
  Truncated = 4,
  Oversized = 5,
  DimensionMismatch = 6,
  NonDivisibleDimensions = 7,
  FlatImage = 8,
  NoBackground = 9,
  EmptyForeground = 10,
  EmptySkeleton = 11,
  ZeroMass = 12,
  DegenerateRow = 13,
  EmptyResult = 14,
  NoCandidateSites = 15,
  DegenerateColumn = 16,
  TooFewSamples = 17,
  SingularCovariance = 18,
  DegenerateAttribute = 19,
  Internal = 20,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  explicit Error(ErrorCode code) : Error(code, to_string(code)) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace morpho
