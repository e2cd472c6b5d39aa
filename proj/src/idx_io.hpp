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
#include <filesystem>
#include <span>
#include <vector>

#include "grid.hpp"

namespace morpho {

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

/// Equally sized 8-bit images stored back to back, row-major.
class ImageDataset {
 public:
  ImageDataset() = default;
  ImageDataset(int height, int width, std::vector<std::uint8_t> bytes);

  /// Quantises each image to 8 bits (round, clamp to [0, 255]).
  static ImageDataset from_images(std::span<const GrayImage> images);

  std::size_t count() const noexcept { return count_; }
  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t image_size() const noexcept {
    return static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_);
  }

  std::span<const std::uint8_t> image(std::size_t n) const;
  GrayImage gray(std::size_t n) const;
  const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }

  void append(std::span<const std::uint8_t> pixels, int height, int width);
  void append(const GrayImage& image);

  bool operator==(const ImageDataset&) const = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::size_t count_ = 0;
  std::vector<std::uint8_t> bytes_;
};

using LabelVector = std::vector<std::uint8_t>;

ImageDataset read_idx_images(std::span<const std::uint8_t> stream);
std::vector<std::uint8_t> write_idx_images(const ImageDataset& dataset);
LabelVector read_idx_labels(std::span<const std::uint8_t> stream);
std::vector<std::uint8_t> write_idx_labels(const LabelVector& labels);

/// Decompresses when the stream starts with the gzip signature; otherwise returns a copy.
std::vector<std::uint8_t> maybe_gunzip(std::span<const std::uint8_t> stream);
std::vector<std::uint8_t> gzip(std::span<const std::uint8_t> stream);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
/// Writes gzip-compressed output when the path ends in ".gz".
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

ImageDataset load_idx_images(const std::filesystem::path& path);
LabelVector load_idx_labels(const std::filesystem::path& path);
void save_idx_images(const std::filesystem::path& path, const ImageDataset& dataset);
void save_idx_labels(const std::filesystem::path& path, const LabelVector& labels);

}  // namespace morpho
