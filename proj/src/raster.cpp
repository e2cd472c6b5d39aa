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
#include "raster.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

namespace morpho {
namespace {

struct Taps {
  std::array<int, 4> index;
  std::array<double, 4> weight;
};

Taps cubic_taps(double x, int n) noexcept {
  const double base = std::floor(x);
  const double t = x - base;
  Taps taps;
  for (int k = 0; k < 4; ++k) {
    const int i = static_cast<int>(base) + k - 1;
    taps.index[k] = std::clamp(i, 0, n - 1);
    taps.weight[k] = keys_cubic(t - (k - 1));
  }
  return taps;
}

std::vector<Taps> resample_taps(int in, int out) {
  std::vector<Taps> taps(static_cast<std::size_t>(out));
  const double scale = static_cast<double>(in) / out;
  for (int d = 0; d < out; ++d) taps[d] = cubic_taps((d + 0.5) * scale - 0.5, in);
  return taps;
}

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = static_cast<int>(4.0 * sigma + 0.5);
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  for (int i = -radius; i <= radius; ++i) k[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
  const double sum = std::accumulate(k.begin(), k.end(), 0.0);
  for (auto& v : k) v /= sum;
  return k;
}

void require_factor(int factor) {
  if (factor < 1) throw Error(ErrorCode::InvalidArgument, "scale factor must be >= 1");
}

double quantise(double v) noexcept { return std::clamp(std::round(v), 0.0, 255.0); }

constexpr std::array<int, 8> kDr = {-1, -1, 0, 1, 1, 1, 0, -1};
constexpr std::array<int, 8> kDc = {0, 1, 1, 1, 0, -1, -1, -1};

}  // namespace

double keys_cubic(double x) noexcept {
  constexpr double a = -0.5;
  x = std::abs(x);
  if (x <= 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
  if (x < 2.0) return ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a;
  return 0.0;
}

double bicubic_sample(const GrayImage& image, double row, double col) noexcept {
  const Taps tr = cubic_taps(row, image.height());
  const Taps tc = cubic_taps(col, image.width());
  double acc = 0.0;
  for (int a = 0; a < 4; ++a) {
    if (tr.weight[a] == 0.0) continue;
    double line = 0.0;
    for (int b = 0; b < 4; ++b) {
      if (tc.weight[b] == 0.0) continue;
      line += tc.weight[b] * image(tr.index[a], tc.index[b]);
    }
    acc += tr.weight[a] * line;
  }
  return acc;
}

GrayImage gaussian_smooth(const GrayImage& image, double sigma) {
  if (!(sigma > 0.0)) return image;
  const auto kernel = gaussian_kernel(sigma);
  const int radius = static_cast<int>(kernel.size() / 2);
  const int h = image.height(), w = image.width();

  GrayImage tmp(h, w);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) acc += kernel[k + radius] * image(r, std::clamp(c + k, 0, w - 1));
      tmp(r, c) = acc;
    }
  GrayImage out(h, w);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) acc += kernel[k + radius] * tmp(std::clamp(r + k, 0, h - 1), c);
      out(r, c) = acc;
    }
  return out;
}

GrayImage resample_bicubic(const GrayImage& image, int out_height, int out_width) {
  if (image.empty()) throw Error(ErrorCode::InvalidArgument, "cannot resample an empty image");
  if (out_height < 1 || out_width < 1) throw Error(ErrorCode::InvalidArgument, "output size must be positive");
  const auto col_taps = resample_taps(image.width(), out_width);
  const auto row_taps = resample_taps(image.height(), out_height);

  GrayImage horizontal(image.height(), out_width);
  for (int r = 0; r < image.height(); ++r)
    for (int c = 0; c < out_width; ++c) {
      const Taps& t = col_taps[c];
      double acc = 0.0;
      for (int k = 0; k < 4; ++k) acc += t.weight[k] * image(r, t.index[k]);
      horizontal(r, c) = acc;
    }
  GrayImage out(out_height, out_width);
  for (int r = 0; r < out_height; ++r) {
    const Taps& t = row_taps[r];
    for (int c = 0; c < out_width; ++c) {
      double acc = 0.0;
      for (int k = 0; k < 4; ++k) acc += t.weight[k] * horizontal(t.index[k], c);
      out(r, c) = acc;
    }
  }
  return out;
}

GrayImage upscale(const GrayImage& image, int factor) {
  require_factor(factor);
  if (factor == 1) return image;
  return gaussian_smooth(resample_bicubic(image, image.height() * factor, image.width() * factor),
                         rescale_sigma(factor));
}

GrayImage downscale(const GrayImage& image, int factor) {
  require_factor(factor);
  if (image.height() % factor != 0 || image.width() % factor != 0)
    throw Error(ErrorCode::NonDivisibleDimensions, std::to_string(image.height()) + "x" +
                                                       std::to_string(image.width()) + " is not divisible by " +
                                                       std::to_string(factor));
  GrayImage out = factor == 1 ? image
                              : resample_bicubic(gaussian_smooth(image, rescale_sigma(factor)),
                                                 image.height() / factor, image.width() / factor);
  for (auto& v : out.data()) v = quantise(v);
  return out;
}

GrayImage downscale(const BinaryImage& image, int factor) { return downscale(to_gray(image), factor); }

GrayImage to_gray(const BinaryImage& image, double foreground) {
  GrayImage out(image.height(), image.width());
  std::transform(image.data().begin(), image.data().end(), out.data().begin(),
                 [foreground](std::uint8_t v) { return v ? foreground : 0.0; });
  return out;
}

BinaryImage binarize(const GrayImage& image) {
  if (image.empty()) throw Error(ErrorCode::InvalidArgument, "cannot binarise an empty image");
  const auto [lo, hi] = std::minmax_element(image.data().begin(), image.data().end());
  if (*hi == *lo) throw Error(ErrorCode::FlatImage, "image has no intensity range");
  const double threshold = *lo + (*hi - *lo) / 2.0;
  BinaryImage out(image.height(), image.width());
  std::transform(image.data().begin(), image.data().end(), out.data().begin(),
                 [threshold](double v) { return static_cast<std::uint8_t>(v >= threshold); });
  return out;
}

// Two-pass exact transform: per-column nearest feature, then the lower envelope of
// parabolas along each row. All arithmetic on squared integer distances.
Grid<std::int64_t> squared_distance_to(const BinaryImage& image, std::uint8_t feature) {
  const int h = image.height(), w = image.width();
  constexpr std::int64_t inf = kNoFeature;
  Grid<std::int64_t> column(h, w, inf);

  for (int c = 0; c < w; ++c) {
    std::int64_t d = inf;
    for (int r = 0; r < h; ++r) {
      if ((image(r, c) != 0) == (feature != 0)) d = 0;
      else if (d != inf) ++d;
      column(r, c) = d;
    }
    d = inf;
    for (int r = h - 1; r >= 0; --r) {
      if (column(r, c) == 0) d = 0;
      else if (d != inf) ++d;
      column(r, c) = std::min(column(r, c), d);
    }
  }

  Grid<std::int64_t> out(h, w, inf);
  std::vector<std::int64_t> f(static_cast<std::size_t>(w));
  std::vector<int> sites(static_cast<std::size_t>(w));
  std::vector<double> bounds(static_cast<std::size_t>(w) + 1);
  for (int r = 0; r < h; ++r) {
    int k = -1;
    for (int q = 0; q < w; ++q) {
      const std::int64_t g = column(r, q);
      if (g == inf) continue;
      f[q] = g * g;
      double s = -std::numeric_limits<double>::infinity();
      while (k >= 0) {
        const int v = sites[k];
        s = static_cast<double>((f[q] + std::int64_t{q} * q) - (f[v] + std::int64_t{v} * v)) / (2.0 * (q - v));
        if (s > bounds[k]) break;
        --k;
      }
      ++k;
      sites[k] = q;
      bounds[k] = k == 0 ? -std::numeric_limits<double>::infinity() : s;
      bounds[k + 1] = std::numeric_limits<double>::infinity();
    }
    if (k < 0) continue;
    int j = 0;
    for (int c = 0; c < w; ++c) {
      while (bounds[j + 1] < c) ++j;
      const std::int64_t dc = c - sites[j];
      out(r, c) = dc * dc + f[sites[j]];
    }
  }
  return out;
}

DistanceMap edt(const BinaryImage& image) {
  const bool any_fg = std::any_of(image.data().begin(), image.data().end(), [](auto v) { return v != 0; });
  const bool any_bg = std::any_of(image.data().begin(), image.data().end(), [](auto v) { return v == 0; });
  DistanceMap out(image.height(), image.width(), 0.0);
  if (!any_fg) return out;
  if (!any_bg) throw Error(ErrorCode::NoBackground, "image has no background pixel");
  const auto sq = squared_distance_to(image, 0);
  for (std::size_t i = 0; i < sq.size(); ++i) out.data()[i] = std::sqrt(static_cast<double>(sq.data()[i]));
  return out;
}

int Skeleton::degree(const Pixel& p) const noexcept {
  int n = 0;
  for (int k = 0; k < 8; ++k) n += contains(p.row + kDr[k], p.col + kDc[k]);
  return n;
}

BinaryImage dilate_disc(const BinaryImage& image, double radius) {
  if (!(radius >= 0.0)) throw Error(ErrorCode::InvalidArgument, "disc radius must be >= 0");
  const auto sq = squared_distance_to(image, 1);
  const double r2 = radius * radius;
  BinaryImage out(image.height(), image.width());
  for (std::size_t i = 0; i < sq.size(); ++i)
    out.data()[i] = sq.data()[i] != kNoFeature && static_cast<double>(sq.data()[i]) <= r2;
  return out;
}

BinaryImage erode_disc(const BinaryImage& image, double radius) {
  if (!(radius >= 0.0)) throw Error(ErrorCode::InvalidArgument, "disc radius must be >= 0");
  const auto sq = squared_distance_to(image, 0);
  const double r2 = radius * radius;
  BinaryImage out(image.height(), image.width());
  for (std::size_t i = 0; i < sq.size(); ++i)
    out.data()[i] = sq.data()[i] == kNoFeature || static_cast<double>(sq.data()[i]) > r2;
  return out;
}

BinaryImage complement(const BinaryImage& image) {
  BinaryImage out(image.height(), image.width());
  std::transform(image.data().begin(), image.data().end(), out.data().begin(),
                 [](std::uint8_t v) { return static_cast<std::uint8_t>(v == 0); });
  return out;
}

int count_components(const BinaryImage& image) {
  const int h = image.height(), w = image.width();
  std::vector<int> label(image.size(), -1);
  std::vector<std::size_t> stack;
  int components = 0;
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      if (!image(r, c) || label[image.index(r, c)] >= 0) continue;
      label[image.index(r, c)] = components;
      stack.push_back(image.index(r, c));
      while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        const int pr = static_cast<int>(i / w), pc = static_cast<int>(i % w);
        for (int k = 0; k < 8; ++k) {
          const int nr = pr + kDr[k], nc = pc + kDc[k];
          if (!image.contains(nr, nc) || !image(nr, nc)) continue;
          auto& l = label[image.index(nr, nc)];
          if (l < 0) {
            l = components;
            stack.push_back(image.index(nr, nc));
          }
        }
      }
      ++components;
    }
  return components;
}

GrayImage warp_backward(const GrayImage& source, const BackwardMap& mapping) {
  GrayImage out(source.height(), source.width());
  for (int r = 0; r < source.height(); ++r)
    for (int c = 0; c < source.width(); ++c) {
      const Point p = mapping(r, c);
      out(r, c) = bicubic_sample(source, p.row, p.col);
    }
  return out;
}

}  // namespace morpho
