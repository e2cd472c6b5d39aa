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

#include "grid.hpp"
#include "raster.hpp"

namespace morpho {

/// The five shape attributes of one glyph. Lengths in original-resolution pixels,
/// slant in radians (positive = forward lean).
struct MorphometryRecord {
  double length = 0.0;
  double thickness = 0.0;
  double slant = 0.0;
  double width = 0.0;
  double height = 0.0;

  bool operator==(const MorphometryRecord&) const = default;
};

/// Products of the upscale -> binarise -> distance transform -> skeleton chain.
struct PipelineProducts {
  int factor = 1;
  BinaryImage binary;
  DistanceMap distance;
  Skeleton skeleton;
};

inline constexpr int kDefaultScale = 4;
inline constexpr double kDefaultMass = 0.98;

PipelineProducts run_pipeline(const GrayImage& image, int factor = kDefaultScale);

/// Sum of centre distances over 8-adjacent skeleton pairs, each pair counted once, divided by `factor`.
double stroke_length(const Skeleton& skeleton, int factor);
double stroke_length(const PipelineProducts& products);

/// Twice the mean distance-map value over skeleton pixels, divided by `factor`.
double stroke_thickness(const Skeleton& skeleton, int factor);
double stroke_thickness(const PipelineProducts& products);

/// Horizontal-shear angle from second-order intensity moments: atan(-S12 / S22).
double slant(const GrayImage& image);

struct Extent {
  double width = 0.0;
  double height = 0.0;
};

/// Equal-tailed extents of the image mass: vertically under a horizontal sweep and
/// horizontally under a sweep slanted by `slant_radians`.
Extent bounding_parallelogram(const GrayImage& image, double slant_radians, double mass = kDefaultMass);

MorphometryRecord measure(const GrayImage& image, int factor = kDefaultScale);

}  // namespace morpho
