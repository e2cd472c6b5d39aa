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

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "idx_io.hpp"
#include "morphometry.hpp"
#include "rng.hpp"

namespace morpho {

// Values are part of the C ABI; append only.
enum class PerturbKind : int { Identity = 0, Thin = 1, Thicken = 2, Swell = 3, Fracture = 4 };

const char* to_string(PerturbKind kind) noexcept;

/// A parametrised perturbation request. Lengths are in original-resolution pixels.
struct PerturbSpec {
  PerturbKind kind = PerturbKind::Identity;
  double amount = 0.0;          // thin/thicken: fraction of stroke thickness
  double strength = 7.0;        // swell: exponent gamma, > 1
  double radius_coef = 1.5;     // swell: R = radius_coef * sqrt(thickness)
  int count = 3;                // fracture
  double brush = 1.5;           // fracture: brush diameter
  double min_distance = 2.0;    // fracture: clearance from tips and forks
  double window = 5.0;          // fracture: side of the orientation window
  double extension = 0.5;       // fracture: overshoot on both ends

  static PerturbSpec identity() { return {}; }
  static PerturbSpec thin(double amount = 0.7) { return {.kind = PerturbKind::Thin, .amount = amount}; }
  static PerturbSpec thicken(double amount = 1.0) { return {.kind = PerturbKind::Thicken, .amount = amount}; }
  static PerturbSpec swell(double strength = 7.0, double radius_coef = 1.5) {
    return {.kind = PerturbKind::Swell, .strength = strength, .radius_coef = radius_coef};
  }
  static PerturbSpec fracture(int count = 3) { return {.kind = PerturbKind::Fracture, .count = count}; }

  /// Throws InvalidArgument on out-of-range parameters.
  void validate() const;
};

struct FractureRecord {
  Pixel site;             // high-resolution coordinates
  double direction = 0;   // local stroke direction, radians from the +column axis (rows grow downwards)
  double normal = 0;      // drawn fracture direction
  double half_length = 0; // high-resolution pixels
};

/// Audit record of one perturbation, sufficient to regenerate it.
struct PerturbOutcome {
  PerturbKind kind = PerturbKind::Identity;
  PerturbSpec spec;
  std::uint64_t seed = 0;
  bool applied = true;
  ErrorCode failure = ErrorCode::Ok;
  std::string failure_message;
  double radius = 0;                  // thin/thicken disc radius or swell radius, high-res px
  std::optional<Pixel> swell_center;  // high-res coordinates
  int fractures_requested = 0;
  std::vector<FractureRecord> fractures;
};

/// Erosion by a disc of radius amount * theta / 2, theta the high-resolution thickness.
BinaryImage thin(const PipelineProducts& products, double amount = 0.7);
/// Dilation by a disc of radius amount * theta / 2.
BinaryImage thicken(const PipelineProducts& products, double amount = 1.0);

/// Radial power warp about `center`: pixels closer than `radius` sample the source at
/// center + (r - center) * (|r - center| / radius)^(strength - 1). Others are copied.
GrayImage swell_at(const GrayImage& source, Pixel center, double radius, double strength);

std::pair<GrayImage, PerturbOutcome> swell(const PipelineProducts& products, double strength, double radius_coef,
                                           Rng& rng);

/// Skeleton pixels further than `min_distance` (high-res px) from every tip and fork.
std::vector<Pixel> fracture_candidates(const Skeleton& skeleton, double min_distance);

std::pair<BinaryImage, PerturbOutcome> fracture(const PipelineProducts& products, const PerturbSpec& spec, Rng& rng);

/// Pipeline steps 1-5 at high resolution; swelling yields grey levels, everything else {0, 255}.
std::pair<GrayImage, PerturbOutcome> perturb_high_res(const GrayImage& image, const PerturbSpec& spec, int factor,
                                                      std::uint64_t seed);

/// Full pipeline including downscaling to 8-bit levels. A failed perturbation falls
/// back to the plain pipeline image and is recorded in the outcome.
std::pair<GrayImage, PerturbOutcome> perturb_image(const GrayImage& image, const PerturbSpec& spec, int factor,
                                                   std::uint64_t seed);

struct MixedDataset {
  ImageDataset images;
  LabelVector labels;
  LabelVector perturbation_labels;  // menu positions
  std::vector<PerturbOutcome> outcomes;
};

/// Seed of the menu draw and of the perturbation for image `index`.
std::uint64_t image_seed(std::uint64_t master_seed, std::size_t index) noexcept;
std::uint64_t perturbation_seed(std::uint64_t master_seed, std::size_t index) noexcept;
std::size_t menu_choice(std::uint64_t master_seed, std::size_t index, std::size_t menu_size);

MixedDataset build_mixed_dataset(const ImageDataset& images, const LabelVector& labels,
                                 const std::vector<PerturbSpec>& menu, std::uint64_t master_seed,
                                 int factor = kDefaultScale, unsigned workers = 1);

/// One JSON object (no trailing newline) describing the outcome of image `index`.
std::string outcome_to_json(const PerturbOutcome& outcome, std::size_t index, int menu_position = -1);

}  // namespace morpho
