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
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "morphometry.hpp"
#include "support/synthetic.hpp"

using namespace morpho;
using namespace morpho::testing;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Ok;
}

Skeleton skeleton_from(const std::vector<Pixel>& pixels, int h, int w) {
  Skeleton s;
  s.height = h;
  s.width = w;
  s.mask = BinaryImage(h, w, 0);
  for (const auto& p : pixels) s.mask(p.row, p.col) = 1;
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      if (s.mask(r, c)) {
        s.pixels.push_back({r, c});
        s.radius.push_back(1.0);
      }
  return s;
}

// Sum over every ordered pair of touching skeleton pixels, halved.
double oracle_length(const Skeleton& s, int f) {
  double total = 0;
  for (const auto& a : s.pixels)
    for (const auto& b : s.pixels) {
      const int dr = std::abs(a.row - b.row), dc = std::abs(a.col - b.col);
      if (std::max(dr, dc) == 1) total += std::hypot(dr, dc);
    }
  return total / 2 / f;
}

double oracle_slant(const GrayImage& img) {
  long double m = 0, mi = 0, mj = 0;
  for (int j = 0; j < img.height(); ++j)
    for (int i = 0; i < img.width(); ++i) {
      m += img(j, i);
      mi += img(j, i) * i;
      mj += img(j, i) * j;
    }
  mi /= m;
  mj /= m;
  long double s12 = 0, s22 = 0;
  for (int j = 0; j < img.height(); ++j)
    for (int i = 0; i < img.width(); ++i) {
      s12 += img(j, i) * (i - mi) * (j - mj);
      s22 += img(j, i) * (j - mj) * (j - mj);
    }
  return static_cast<double>(std::atan(-s12 / s22));
}

GrayImage pad(const GrayImage& img, int top, int left, int bottom, int right) {
  GrayImage out(img.height() + top + bottom, img.width() + left + right, 0.0);
  for (int r = 0; r < img.height(); ++r)
    for (int c = 0; c < img.width(); ++c) out(r + top, c + left) = img(r, c);
  return out;
}

GrayImage solid_box(int h, int w, int top, int left, int rows, int cols) {
  GrayImage img(h, w, 0.0);
  for (int r = top; r < top + rows; ++r)
    for (int c = left; c < left + cols; ++c) img(r, c) = 255.0;
  return img;
}

}  // namespace

TEST_CASE("pipeline products") {
  std::mt19937_64 rng(1);
  const GrayImage g = random_stroke_glyph(rng);
  const PipelineProducts p = run_pipeline(g, 4);
  CHECK(p.binary.height() == 112);
  CHECK(p.distance.width() == 112);
  CHECK(p.factor == 4);
  for (const auto& px : p.skeleton.pixels) CHECK(p.binary(px.row, px.col) == 1);
  const PipelineProducts native = run_pipeline(g, 1);
  CHECK(native.binary.height() == 28);
  CHECK(code_of([] { run_pipeline(GrayImage(28, 28, 0.0)); }) == ErrorCode::FlatImage);
}

TEST_CASE("stroke length counts each adjacency once") {
  std::vector<Pixel> run;
  for (int c = 0; c < 41; ++c) run.push_back({5, c + 2});
  CHECK(stroke_length(skeleton_from(run, 10, 50), 4) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(stroke_length(skeleton_from({{3, 3}}, 8, 8), 4) == 0.0);
  for (int n : {2, 5, 17}) {
    std::vector<Pixel> diag;
    for (int k = 0; k < n; ++k) diag.push_back({k, k});
    CHECK(stroke_length(skeleton_from(diag, n, n), 4) == doctest::Approx((n - 1) * std::sqrt(2.0) / 4));
  }
  CHECK(code_of([] { stroke_length(Skeleton{}, 4); }) == ErrorCode::EmptySkeleton);
}

TEST_CASE("stroke thickness") {
  SUBCASE("high-res bar 8 px wide") {
    BinaryImage bar(40, 120, 0);
    for (int r = 16; r < 24; ++r)
      for (int c = 10; c < 110; ++c) bar(r, c) = 1;
    const DistanceMap d = edt(bar);
    const double t = stroke_thickness(skeletonize(bar, d), 4);
    CHECK(t == doctest::Approx(2.0).epsilon(0.125));
  }
  SUBCASE("high-res disc of radius 12") {
    BinaryImage disc(41, 41, 0);
    for (int r = 0; r < 41; ++r)
      for (int c = 0; c < 41; ++c) disc(r, c) = std::hypot(r - 20.0, c - 20.0) <= 12.0;
    const double t = stroke_thickness(skeletonize(disc, edt(disc)), 4);
    CHECK(std::abs(t - 6.0) <= 0.5);
  }
  SUBCASE("empty skeleton") { CHECK(code_of([] { stroke_thickness(Skeleton{}, 4); }) == ErrorCode::EmptySkeleton); }
}

TEST_CASE("length and thickness agree with brute-force oracles on a glyph suite") {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 12; ++i) {
    const GrayImage g = random_stroke_glyph(rng);
    const PipelineProducts p = run_pipeline(g, 4);
    CHECK(stroke_length(p) == doctest::Approx(oracle_length(p.skeleton, 4)).epsilon(1e-12));
    const DistanceMap ref = brute_force_edt(p.binary);
    double sum = 0;
    for (const auto& px : p.skeleton.pixels) sum += ref(px.row, px.col);
    CHECK(stroke_thickness(p) == doctest::Approx(2 * sum / p.skeleton.pixels.size() / 4).epsilon(1e-12));
    CHECK(slant(g) == doctest::Approx(oracle_slant(g)).epsilon(1e-12));
  }
}

TEST_CASE("slant") {
  SUBCASE("mirror-symmetric image is upright") {
    const GrayImage g = vertical_bar(28, 28, 4, 18);
    CHECK(std::abs(slant(g)) < 1e-12);
  }
  SUBCASE("sheared bar") {
    const GrayImage g = sheared_bar(28, 28, 3, 20, 0.3);
    CHECK(std::abs(slant(g) - std::atan(0.3)) <= 0.02);
  }
  SUBCASE("mirror antisymmetry and intensity-scale invariance") {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 20; ++i) {
      GrayImage g = random_stroke_glyph(rng);
      CHECK(std::abs(slant(mirror(g)) + slant(g)) <= 1e-12);
      GrayImage scaled = g;
      for (auto& v : scaled.pixels()) v *= 0.37;
      CHECK(slant(scaled) == doctest::Approx(slant(g)).epsilon(1e-12));
    }
  }
  SUBCASE("errors") {
    CHECK(code_of([] { slant(GrayImage(5, 5, 0.0)); }) == ErrorCode::ZeroMass);
    CHECK(code_of([] { slant(solid_box(5, 5, 2, 0, 1, 5)); }) == ErrorCode::DegenerateRow);
  }
}

TEST_CASE("bounding parallelogram of an upright box") {
  const GrayImage box = solid_box(30, 12, 5, 4, 20, 4);
  const Extent full = bounding_parallelogram(box, 0.0, 1.0);
  CHECK(full.width == 4.0);
  CHECK(full.height == 20.0);
  const Extent trimmed = bounding_parallelogram(box, 0.0, 0.98);
  // One percent of the mass sits in 4% of an edge column and 20% of an edge row.
  CHECK(trimmed.width == doctest::Approx(4.0 - 2 * 0.04).epsilon(1e-12));
  CHECK(trimmed.height == doctest::Approx(20.0 - 2 * 0.2).epsilon(1e-12));
  CHECK(full.width - trimmed.width <= 1.0);
  CHECK(full.height - trimmed.height <= 1.0);
  CHECK(code_of([&] { bounding_parallelogram(box, 0.0, 0.0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { bounding_parallelogram(GrayImage(4, 4, 0.0), 0.0); }) == ErrorCode::ZeroMass);
}

TEST_CASE("width is deconfounded from slant") {
  // Bars whose upright edges fall inside pixels, so both versions carry antialiased edges.
  const std::pair<double, double> bars[] = {{3.0, 0.0}, {4.0, 0.5}, {5.0, 0.0}, {2.0, 0.5}};
  for (auto [thickness, offset] : bars) {
    const double upright = bounding_parallelogram(sheared_bar(28, 28, thickness, 20, 0.0, offset), 0.0).width;
    for (double deg : {-30.0, -15.0, 15.0, 30.0}) {
      const GrayImage g = sheared_bar(28, 28, thickness, 20, std::tan(deg * std::numbers::pi / 180), offset);
      CAPTURE(thickness);
      CAPTURE(deg);
      CHECK(std::abs(bounding_parallelogram(g, slant(g)).width - upright) <= 0.5);
      // Measured upright, the same glyph looks much wider.
      CHECK(bounding_parallelogram(g, 0.0).width > upright + 2.0);
    }
  }
}

TEST_CASE("sweep over unit footprints matches unit bins when upright") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 10; ++i) {
    const GrayImage g = random_stroke_glyph(rng);
    // Column marginal with linear interpolation inside unit bins.
    std::vector<double> cols(28, 0.0);
    double total = 0;
    for (int r = 0; r < 28; ++r)
      for (int c = 0; c < 28; ++c) {
        cols[c] += g(r, c);
        total += g(r, c);
      }
    auto position = [&](double target) {
      double acc = 0;
      for (int k = 0; k < 28; ++k) {
        if (cols[k] <= 0) continue;
        if (acc + cols[k] >= target) return k - 0.5 + (target - acc) / cols[k];
        acc += cols[k];
      }
      return 27.5;
    };
    const double expected = position(0.99 * total) - position(0.01 * total);
    CHECK(bounding_parallelogram(g, 0.0).width == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("mirroring preserves width and height at mirrored slant") {
  std::mt19937_64 rng(15);
  for (int i = 0; i < 10; ++i) {
    const GrayImage g = random_stroke_glyph(rng);
    const double a = slant(g);
    const Extent e = bounding_parallelogram(g, a), m = bounding_parallelogram(mirror(g), -a);
    CHECK(e.width == doctest::Approx(m.width).epsilon(1e-9));
    CHECK(e.height == doctest::Approx(m.height).epsilon(1e-9));
  }
}

TEST_CASE("measure") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 25; ++i) {
    const GrayImage g = random_stroke_glyph(rng);
    const MorphometryRecord a = measure(g), b = measure(g);
    CHECK(a == b);
    CHECK(a.length >= 0);
    CHECK(a.thickness >= 0);
    CHECK(a.width >= 0);
    CHECK(a.height >= 0);
    CHECK(std::abs(a.slant) < std::numbers::pi / 2);

    const MorphometryRecord padded = measure(pad(g, 3, 5, 1, 2));
    CHECK(std::abs(padded.length - a.length) <= 0.1);
    CHECK(std::abs(padded.thickness - a.thickness) <= 0.1);
    CHECK(std::abs(padded.width - a.width) <= 0.1);
    CHECK(std::abs(padded.height - a.height) <= 0.1);
    CHECK(std::abs(padded.slant - a.slant) <= 1e-9);
  }
  try {
    measure(GrayImage(28, 28, 0.0));
    FAIL("expected FlatImage");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FlatImage);
    CHECK(std::string(e.what()).rfind("pipeline:", 0) == 0);
  }
}

TEST_CASE("thickness is monotone under morphology") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 10; ++i) {
    const PipelineProducts p = run_pipeline(random_stroke_glyph(rng), 4);
    auto thickness_of = [](const BinaryImage& b) { return stroke_thickness(skeletonize(b, edt(b)), 4); };
    const double t = thickness_of(p.binary);
    CHECK(thickness_of(erode_disc(p.binary, 2.0)) <= t);
    CHECK(thickness_of(dilate_disc(p.binary, 2.0)) >= t);
  }
}

TEST_CASE("thickness of synthetic bars and discs") {
  for (double t = 2; t <= 8; t += 0.5) {
    CHECK(std::abs(measure(horizontal_bar(28, 28, t, 20)).thickness - t) <= 0.5);
    CHECK(std::abs(measure(vertical_bar(28, 28, t, 20)).thickness - t) <= 0.5);
  }
  for (double r = 3; r <= 8; r += 1) CHECK(std::abs(measure(disc(28, 28, r)).thickness - 2 * r) <= 0.5);
}
