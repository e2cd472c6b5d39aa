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
#include <cstdint>
#include <span>
#include <vector>

#include "error.hpp"

namespace morpho {

/// Row-major 2-D raster. Row index first, column second.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int height, int width, T fill = T{}) : height_(height), width_(width) {
    if (height < 0 || width < 0) throw Error(ErrorCode::InvalidArgument, "negative grid dimensions");
    data_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), fill);
  }
  Grid(int height, int width, std::vector<T> data) : height_(height), width_(width), data_(std::move(data)) {
    if (height < 0 || width < 0 ||
        data_.size() != static_cast<std::size_t>(height) * static_cast<std::size_t>(width))
      throw Error(ErrorCode::DimensionMismatch, "grid data does not match its dimensions");
  }

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  bool contains(int row, int col) const noexcept {
    return row >= 0 && col >= 0 && row < height_ && col < width_;
  }

  T& operator()(int row, int col) noexcept { return data_[index(row, col)]; }
  const T& operator()(int row, int col) const noexcept { return data_[index(row, col)]; }

  std::size_t index(int row, int col) const noexcept {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(col);
  }

  std::span<T> pixels() noexcept { return data_; }
  std::span<const T> pixels() const noexcept { return data_; }
  std::vector<T>& data() noexcept { return data_; }
  const std::vector<T>& data() const noexcept { return data_; }

  bool operator==(const Grid&) const = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<T> data_;
};

/// Real-valued intensities, canonical range [0, 255].
using GrayImage = Grid<double>;
/// 1 = foreground (ink), 0 = background.
using BinaryImage = Grid<std::uint8_t>;
/// Per-pixel Euclidean distance to the nearest background pixel.
using DistanceMap = Grid<double>;

struct Pixel {
  int row = 0;
  int col = 0;
  bool operator==(const Pixel&) const = default;
};

}  // namespace morpho
