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
#include "error.hpp"

namespace morpho {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Ok: return "Ok";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::Truncated: return "Truncated";
    case ErrorCode::Oversized: return "Oversized";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonDivisibleDimensions: return "NonDivisibleDimensions";
    case ErrorCode::FlatImage: return "FlatImage";
    case ErrorCode::NoBackground: return "NoBackground";
    case ErrorCode::EmptyForeground: return "EmptyForeground";
    case ErrorCode::EmptySkeleton: return "EmptySkeleton";
    case ErrorCode::ZeroMass: return "ZeroMass";
    case ErrorCode::DegenerateRow: return "DegenerateRow";
    case ErrorCode::EmptyResult: return "EmptyResult";
    case ErrorCode::NoCandidateSites: return "NoCandidateSites";
    case ErrorCode::DegenerateColumn: return "DegenerateColumn";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::SingularCovariance: return "SingularCovariance";
    case ErrorCode::DegenerateAttribute: return "DegenerateAttribute";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace morpho
