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
#include <functional>
#include <vector>

#include "grid.hpp"

namespace morpho {

struct Point {
  double row = 0.0;
  double col = 0.0;
};

/// Keys cubic convolution kernel, a = -0.5.
double keys_cubic(double x) noexcept;

/// Bicubic interpolation at a fractional (row, col); taps outside the grid clamp to the border.
double bicubic_sample(const GrayImage& image, double row, double col) noexcept;

/// Separable Gaussian blur, kernel truncated at 4 sigma, edge-replicated borders.
GrayImage gaussian_smooth(const GrayImage& image, double sigma);

/// Bicubic resampling to (out_height, out_width) with pixel-centre alignment.
GrayImage resample_bicubic(const GrayImage& image, int out_height, int out_width);

/// Smoothing bandwidth used when rescaling by `factor`, in high-resolution pixels.
inline double rescale_sigma(int factor) noexcept { return 2.0 * factor / 6.0; }

/// Bicubic upsampling by an integer factor, followed by Gaussian smoothing.
GrayImage upscale(const GrayImage& image, int factor);

/// Gaussian smoothing, then bicubic sampling to (H/f, W/f); output is rounded to 8-bit levels.
GrayImage downscale(const GrayImage& image, int factor);
GrayImage downscale(const BinaryImage& image, int factor);

GrayImage to_gray(const BinaryImage& image, double foreground = 255.0);

/// Foreground where intensity >= min + (max - min) / 2. Throws FlatImage on constant input.
BinaryImage binarize(const GrayImage& image);

/// Squared distance from every pixel to the nearest pixel whose value equals `feature`.
/// Pixels with no feature anywhere in the image get `kNoFeature`.
inline constexpr std::int64_t kNoFeature = INT64_MAX;
Grid<std::int64_t> squared_distance_to(const BinaryImage& image, std::uint8_t feature);

/// Exact Euclidean distance from each foreground pixel to the nearest background pixel.
/// Throws NoBackground if the image has foreground but no background.
DistanceMap edt(const BinaryImage& image);

struct Skeleton {
  int height = 0;
  int width = 0;
  BinaryImage mask;
  std::vector<Pixel> pixels;   // raster order
  std::vector<double> radius;  // distance-map value at each pixel

  bool contains(int row, int col) const noexcept { return mask.contains(row, col) && mask(row, col) != 0; }
  /// Number of 8-neighbours that are also skeleton pixels.
  int degree(const Pixel& p) const noexcept;
  bool empty() const noexcept { return pixels.empty(); }
};

/// Topology-preserving thinning in ascending distance order. End points survive only
/// where they sit on a distance ridge, which prunes boundary spurs.
Skeleton skeletonize(const BinaryImage& image, const DistanceMap& distance);

/// Minkowski dilation/erosion by the lattice disc {di^2 + dj^2 <= r^2}.
/// Positions outside the image never contribute, which keeps the two operations exact duals.
BinaryImage dilate_disc(const BinaryImage& image, double radius);
BinaryImage erode_disc(const BinaryImage& image, double radius);

BinaryImage complement(const BinaryImage& image);

/// Number of 8-connected foreground components.
int count_components(const BinaryImage& image);

using BackwardMap = std::function<Point(int row, int col)>;

/// Each output pixel takes the bicubic interpolation of `source` at mapping(row, col).
GrayImage warp_backward(const GrayImage& source, const BackwardMap& mapping);

}  // namespace morpho
