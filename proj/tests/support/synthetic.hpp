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
// Synthetic glyphs and brute-force reference implementations for the test suites.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "grid.hpp"

namespace morpho::testing {

// Coverage-antialiased rendering of a region given by an inside test on continuous
// coordinates, where pixel (r, c) covers [r, r+1) x [c, c+1).
inline GrayImage render(int height, int width, const std::function<bool(double, double)>& inside,
                        int supersample = 8) {
  GrayImage img(height, width);
  const double step = 1.0 / supersample;
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) {
      int hits = 0;
      for (int a = 0; a < supersample; ++a)
        for (int b = 0; b < supersample; ++b)
          hits += inside(r + (a + 0.5) * step, c + (b + 0.5) * step) ? 1 : 0;
      img(r, c) = std::round(255.0 * hits / (supersample * supersample));
    }
  return img;
}

// Vertical bar centred in the canvas. A positive slope leans the top to the right, which
// is the convention under which slant() returns atan(slope).
inline GrayImage sheared_bar(int height, int width, double thickness, double length, double slope,
                             double col_offset = 0.0) {
  const double cy = height / 2.0, cx = width / 2.0 + col_offset;
  return render(height, width, [=](double y, double x) {
    return std::abs(y - cy) <= length / 2 && std::abs(x - cx - slope * (cy - y)) <= thickness / 2;
  });
}

inline GrayImage vertical_bar(int height, int width, double thickness, double length) {
  return sheared_bar(height, width, thickness, length, 0.0);
}

inline GrayImage horizontal_bar(int height, int width, double thickness, double length) {
  const double cy = height / 2.0, cx = width / 2.0;
  return render(height, width, [=](double y, double x) {
    return std::abs(x - cx) <= length / 2 && std::abs(y - cy) <= thickness / 2;
  });
}

inline GrayImage disc(int height, int width, double radius) {
  const double cy = height / 2.0, cx = width / 2.0;
  return render(height, width, [=](double y, double x) { return std::hypot(y - cy, x - cx) <= radius; });
}

inline double segment_distance(double y, double x, double y0, double x0, double y1, double x1) {
  const double dy = y1 - y0, dx = x1 - x0;
  const double len2 = dy * dy + dx * dx;
  const double t = len2 > 0 ? std::clamp(((y - y0) * dy + (x - x0) * dx) / len2, 0.0, 1.0) : 0.0;
  return std::hypot(y - y0 - t * dy, x - x0 - t * dx);
}

// Handwriting-like glyph: a thick polyline through a few random control points, or an
// open arc, with stroke thickness between 2 and 4 px.
inline GrayImage random_stroke_glyph(std::mt19937_64& rng, int size = 28) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double half = 1.0 + u(rng);  // half-thickness in [1, 2)
  const double lo = 5.0, hi = size - 5.0;
  if (u(rng) < 0.35) {
    const double cy = size / 2.0 + (u(rng) - 0.5) * 3, cx = size / 2.0 + (u(rng) - 0.5) * 3;
    const double radius = 5.0 + u(rng) * 3.5;
    const double start = u(rng) * 2 * std::numbers::pi;
    const double sweep = std::numbers::pi * (0.8 + u(rng) * 1.0);
    return render(size, size, [=](double y, double x) {
      double a = std::atan2(y - cy, x - cx) - start;
      a = std::fmod(std::fmod(a, 2 * std::numbers::pi) + 2 * std::numbers::pi, 2 * std::numbers::pi);
      double d;
      if (a <= sweep) {
        d = std::abs(std::hypot(y - cy, x - cx) - radius);
      } else {
        const double e0y = cy + radius * std::sin(start), e0x = cx + radius * std::cos(start);
        const double e1y = cy + radius * std::sin(start + sweep), e1x = cx + radius * std::cos(start + sweep);
        d = std::min(std::hypot(y - e0y, x - e0x), std::hypot(y - e1y, x - e1x));
      }
      return d <= half;
    });
  }
  const int points = 2 + static_cast<int>(u(rng) * 3);
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < points; ++i) pts.push_back({lo + u(rng) * (hi - lo), lo + u(rng) * (hi - lo)});
  return render(size, size, [=](double y, double x) {
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
      if (segment_distance(y, x, pts[i].first, pts[i].second, pts[i + 1].first, pts[i + 1].second) <= half)
        return true;
    return false;
  });
}

inline GrayImage mirror(const GrayImage& img) {
  GrayImage out(img.height(), img.width());
  for (int r = 0; r < img.height(); ++r)
    for (int c = 0; c < img.width(); ++c) out(r, img.width() - 1 - c) = img(r, c);
  return out;
}

// Random binary image: thresholded box-blurred noise, so blobs, holes and several
// components all occur.
inline BinaryImage random_blobs(std::mt19937_64& rng, int height, int width, double density = 0.5) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Grid<double> noise(height, width);
  for (auto& v : noise.pixels()) v = u(rng);
  BinaryImage out(height, width);
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) {
      double s = 0;
      int n = 0;
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc)
          if (noise.contains(r + dr, c + dc)) {
            s += noise(r + dr, c + dc);
            ++n;
          }
      out(r, c) = s / n > 1.0 - density * 0.5 - 0.25 ? 1 : 0;
    }
  return out;
}

// Connected blob grown by a random walk with a brush, away from the border.
inline BinaryImage random_walk_blob(std::mt19937_64& rng, int height, int width, int steps) {
  std::uniform_int_distribution<int> dir(0, 7), brush(0, 2);
  static constexpr int dr[] = {-1, -1, 0, 1, 1, 1, 0, -1};
  static constexpr int dc[] = {0, 1, 1, 1, 0, -1, -1, -1};
  BinaryImage out(height, width);
  int r = height / 2, c = width / 2;
  for (int s = 0; s < steps; ++s) {
    const int b = brush(rng);
    for (int y = -b; y <= b; ++y)
      for (int x = -b; x <= b; ++x)
        if (out.contains(r + y, c + x)) out(r + y, c + x) = 1;
    const int d = dir(rng);
    r = std::clamp(r + dr[d], 3, height - 4);
    c = std::clamp(c + dc[d], 3, width - 4);
  }
  return out;
}

inline BinaryImage random_binary(std::mt19937_64& rng, int height, int width, double p) {
  std::bernoulli_distribution b(p);
  BinaryImage out(height, width);
  for (auto& v : out.pixels()) v = b(rng) ? 1 : 0;
  return out;
}

// All-pairs Euclidean distance from foreground to the nearest background pixel.
inline DistanceMap brute_force_edt(const BinaryImage& img) {
  DistanceMap out(img.height(), img.width(), 0.0);
  std::vector<std::pair<int, int>> background;
  for (int r = 0; r < img.height(); ++r)
    for (int c = 0; c < img.width(); ++c)
      if (!img(r, c)) background.push_back({r, c});
  for (int r = 0; r < img.height(); ++r)
    for (int c = 0; c < img.width(); ++c) {
      if (!img(r, c)) continue;
      long best = std::numeric_limits<long>::max();
      for (auto [br, bc] : background)
        best = std::min<long>(best, long(br - r) * (br - r) + long(bc - c) * (bc - c));
      out(r, c) = std::sqrt(static_cast<double>(best));
    }
  return out;
}

// Component count by repeated relabelling until fixpoint (8-connectivity).
inline int brute_force_components(const BinaryImage& img) {
  const int h = img.height(), w = img.width();
  std::vector<int> label(img.size(), -1);
  for (std::size_t i = 0; i < img.size(); ++i)
    if (img.pixels()[i]) label[i] = static_cast<int>(i);
  for (bool changed = true; changed;) {
    changed = false;
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c) {
        const std::size_t i = img.index(r, c);
        if (label[i] < 0) continue;
        for (int dr = -1; dr <= 1; ++dr)
          for (int dc = -1; dc <= 1; ++dc) {
            if (!img.contains(r + dr, c + dc)) continue;
            const int l = label[img.index(r + dr, c + dc)];
            if (l >= 0 && l < label[i]) {
              label[i] = l;
              changed = true;
            }
          }
      }
  }
  int n = 0;
  for (std::size_t i = 0; i < img.size(); ++i)
    if (label[i] == static_cast<int>(i)) ++n;
  return n;
}

inline double keys(double x) {
  x = std::abs(x);
  const double a = -0.5;
  if (x < 1) return (a + 2) * x * x * x - (a + 3) * x * x + 1;
  if (x < 2) return a * x * x * x - 5 * a * x * x + 8 * a * x - 4 * a;
  return 0;
}

// Bicubic evaluation summing the kernel over every source pixel with border replication
// handled by clamping the evaluated index.
inline double dense_bicubic(const GrayImage& img, double y, double x) {
  double s = 0;
  for (int i = static_cast<int>(std::floor(y)) - 3; i <= static_cast<int>(std::floor(y)) + 3; ++i)
    for (int j = static_cast<int>(std::floor(x)) - 3; j <= static_cast<int>(std::floor(x)) + 3; ++j) {
      const double k = keys(y - i) * keys(x - j);
      if (k == 0) continue;
      s += k * img(std::clamp(i, 0, img.height() - 1), std::clamp(j, 0, img.width() - 1));
    }
  return s;
}

// Full 2-D Gaussian convolution with edge replication, truncated at radius int(4 sigma + 0.5).
inline GrayImage dense_gaussian(const GrayImage& img, double sigma) {
  const int rad = static_cast<int>(4 * sigma + 0.5);
  GrayImage out(img.height(), img.width());
  for (int r = 0; r < img.height(); ++r)
    for (int c = 0; c < img.width(); ++c) {
      double s = 0, norm = 0;
      for (int dy = -rad; dy <= rad; ++dy)
        for (int dx = -rad; dx <= rad; ++dx) {
          const double k = std::exp(-(dy * dy + dx * dx) / (2 * sigma * sigma));
          norm += k;
          s += k * img(std::clamp(r + dy, 0, img.height() - 1), std::clamp(c + dx, 0, img.width() - 1));
        }
      out(r, c) = s / norm;
    }
  return out;
}

inline GrayImage dense_resample(const GrayImage& img, int out_h, int out_w) {
  GrayImage out(out_h, out_w);
  const double sy = static_cast<double>(img.height()) / out_h, sx = static_cast<double>(img.width()) / out_w;
  for (int r = 0; r < out_h; ++r)
    for (int c = 0; c < out_w; ++c) out(r, c) = dense_bicubic(img, (r + 0.5) * sy - 0.5, (c + 0.5) * sx - 0.5);
  return out;
}

inline double mean_abs_diff(const GrayImage& a, const GrayImage& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a.pixels()[i] - b.pixels()[i]);
  return s / static_cast<double>(a.size());
}

}  // namespace morpho::testing
