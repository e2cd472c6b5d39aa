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
#include "idx_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <string>

namespace morpho {
namespace {

std::uint32_t read_be32(std::span<const std::uint8_t> s, std::size_t offset) {
  return (std::uint32_t{s[offset]} << 24) | (std::uint32_t{s[offset + 1]} << 16) |
         (std::uint32_t{s[offset + 2]} << 8) | std::uint32_t{s[offset + 3]};
}

void append_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void check_magic(std::span<const std::uint8_t> s, std::uint32_t expected, std::size_t header_size) {
  if (s.size() < 4) throw Error(ErrorCode::Truncated, "IDX stream shorter than its magic number");
  const std::uint32_t magic = read_be32(s, 0);
  if (magic != expected) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "IDX magic 0x%08X, expected 0x%08X", magic, expected);
    throw Error(ErrorCode::BadMagic, buf);
  }
  if (s.size() < header_size)
    throw Error(ErrorCode::Truncated, "IDX header truncated at byte " + std::to_string(s.size()));
}

void check_payload(std::size_t available, std::uint64_t expected, std::size_t header_size) {
  if (available < expected)
    throw Error(ErrorCode::Truncated, "IDX payload has " + std::to_string(available) + " bytes, header promises " +
                                          std::to_string(expected) + " (offset " +
                                          std::to_string(header_size + available) + ")");
  if (available > expected)
    throw Error(ErrorCode::Oversized, std::to_string(available - expected) + " trailing bytes after offset " +
                                          std::to_string(header_size + expected));
}

std::uint32_t checked_u32(std::size_t v, const char* what) {
  if (v > 0xFFFFFFFFu) throw Error(ErrorCode::InvalidArgument, std::string(what) + " exceeds the IDX u32 range");
  return static_cast<std::uint32_t>(v);
}

}  // namespace

ImageDataset::ImageDataset(int height, int width, std::vector<std::uint8_t> bytes)
    : height_(height), width_(width), bytes_(std::move(bytes)) {
  if (height < 0 || width < 0) throw Error(ErrorCode::InvalidArgument, "negative image dimensions");
  const std::size_t per = image_size();
  if (per == 0) {
    if (!bytes_.empty()) throw Error(ErrorCode::DimensionMismatch, "pixel data for zero-sized images");
    count_ = 0;
    return;
  }
  if (bytes_.size() % per != 0)
    throw Error(ErrorCode::DimensionMismatch, "pixel buffer is not a whole number of images");
  count_ = bytes_.size() / per;
}

ImageDataset ImageDataset::from_images(std::span<const GrayImage> images) {
  ImageDataset out;
  for (const auto& img : images) out.append(img);
  return out;
}

std::span<const std::uint8_t> ImageDataset::image(std::size_t n) const {
  if (n >= count_) throw Error(ErrorCode::InvalidArgument, "image index out of range");
  return std::span<const std::uint8_t>(bytes_).subspan(n * image_size(), image_size());
}

GrayImage ImageDataset::gray(std::size_t n) const {
  const auto px = image(n);
  return GrayImage(height_, width_, std::vector<double>(px.begin(), px.end()));
}

void ImageDataset::append(std::span<const std::uint8_t> pixels, int height, int width) {
  if (count_ == 0 && bytes_.empty()) {
    height_ = height;
    width_ = width;
  } else if (height != height_ || width != width_) {
    throw Error(ErrorCode::DimensionMismatch, "image " + std::to_string(count_) + " is " + std::to_string(height) +
                                                  "x" + std::to_string(width) + ", dataset is " +
                                                  std::to_string(height_) + "x" + std::to_string(width_));
  }
  if (pixels.size() != image_size()) throw Error(ErrorCode::DimensionMismatch, "pixel span size mismatch");
  bytes_.insert(bytes_.end(), pixels.begin(), pixels.end());
  ++count_;
}

void ImageDataset::append(const GrayImage& image) {
  std::vector<std::uint8_t> px(image.size());
  std::transform(image.data().begin(), image.data().end(), px.begin(), [](double v) {
    return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
  });
  append(px, image.height(), image.width());
}

ImageDataset read_idx_images(std::span<const std::uint8_t> stream) {
  constexpr std::size_t kHeader = 16;
  check_magic(stream, kIdxImageMagic, kHeader);
  const std::uint32_t count = read_be32(stream, 4);
  const std::uint32_t height = read_be32(stream, 8);
  const std::uint32_t width = read_be32(stream, 12);
  if (height > 0x7FFFFFFFu || width > 0x7FFFFFFFu)
    throw Error(ErrorCode::InvalidArgument, "IDX image dimensions out of range");
  const std::uint64_t payload = std::uint64_t{count} * height * width;
  check_payload(stream.size() - kHeader, payload, kHeader);

  if (count > 0 && (height == 0 || width == 0))
    throw Error(ErrorCode::InvalidArgument, "IDX declares images with a zero dimension");
  return ImageDataset(static_cast<int>(height), static_cast<int>(width),
                      std::vector<std::uint8_t>(stream.begin() + kHeader, stream.end()));
}

std::vector<std::uint8_t> write_idx_images(const ImageDataset& dataset) {
  std::vector<std::uint8_t> out;
  out.reserve(16 + dataset.bytes().size());
  append_be32(out, kIdxImageMagic);
  append_be32(out, checked_u32(dataset.count(), "image count"));
  append_be32(out, static_cast<std::uint32_t>(dataset.height()));
  append_be32(out, static_cast<std::uint32_t>(dataset.width()));
  out.insert(out.end(), dataset.bytes().begin(), dataset.bytes().end());
  return out;
}

LabelVector read_idx_labels(std::span<const std::uint8_t> stream) {
  constexpr std::size_t kHeader = 8;
  check_magic(stream, kIdxLabelMagic, kHeader);
  const std::uint32_t count = read_be32(stream, 4);
  check_payload(stream.size() - kHeader, count, kHeader);
  return LabelVector(stream.begin() + kHeader, stream.end());
}

std::vector<std::uint8_t> write_idx_labels(const LabelVector& labels) {
  std::vector<std::uint8_t> out;
  out.reserve(8 + labels.size());
  append_be32(out, kIdxLabelMagic);
  append_be32(out, checked_u32(labels.size(), "label count"));
  out.insert(out.end(), labels.begin(), labels.end());
  return out;
}

std::vector<std::uint8_t> maybe_gunzip(std::span<const std::uint8_t> stream) {
  if (stream.size() < 2 || stream[0] != 0x1F || stream[1] != 0x8B)
    return std::vector<std::uint8_t>(stream.begin(), stream.end());

  z_stream zs{};
  if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK) throw Error(ErrorCode::Internal, "inflateInit2 failed");
  zs.next_in = const_cast<Bytef*>(stream.data());
  zs.avail_in = static_cast<uInt>(stream.size());

  std::vector<std::uint8_t> out;
  std::uint8_t chunk[1 << 16];
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    zs.next_out = chunk;
    zs.avail_out = sizeof chunk;
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      throw Error(rc == Z_BUF_ERROR ? ErrorCode::Truncated : ErrorCode::IoError,
                  "gzip stream corrupt or truncated at input offset " + std::to_string(zs.total_in));
    }
    out.insert(out.end(), chunk, chunk + (sizeof chunk - zs.avail_out));
  }
  inflateEnd(&zs);
  return out;
}

std::vector<std::uint8_t> gzip(std::span<const std::uint8_t> stream) {
  z_stream zs{};
  if (deflateInit2(&zs, Z_BEST_COMPRESSION, Z_DEFLATED, 16 + MAX_WBITS, 8, Z_DEFAULT_STRATEGY) != Z_OK)
    throw Error(ErrorCode::Internal, "deflateInit2 failed");
  std::vector<std::uint8_t> out(deflateBound(&zs, static_cast<uLong>(stream.size())) + 32);
  zs.next_in = const_cast<Bytef*>(stream.data());
  zs.avail_in = static_cast<uInt>(stream.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = deflate(&zs, Z_FINISH);
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw Error(ErrorCode::Internal, "deflate failed");
  out.resize(zs.total_out);
  return out;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::IoError, "read error on " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::vector<std::uint8_t> compressed;
  if (path.extension() == ".gz") {
    compressed = gzip(bytes);
    bytes = compressed;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "write error on " + path.string());
}

namespace {

template <typename F>
auto with_file_context(const std::filesystem::path& path, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IoError) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace

ImageDataset load_idx_images(const std::filesystem::path& path) {
  return with_file_context(path, [&] { return read_idx_images(maybe_gunzip(read_file(path))); });
}

LabelVector load_idx_labels(const std::filesystem::path& path) {
  return with_file_context(path, [&] { return read_idx_labels(maybe_gunzip(read_file(path))); });
}

void save_idx_images(const std::filesystem::path& path, const ImageDataset& dataset) {
  write_file(path, write_idx_images(dataset));
}

void save_idx_labels(const std::filesystem::path& path, const LabelVector& labels) {
  write_file(path, write_idx_labels(labels));
}

}  // namespace morpho
