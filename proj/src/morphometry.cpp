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
#include "morphometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace morpho {
namespace {

struct Moments {
  double mass = 0.0;
  double col_mean = 0.0;
  double row_mean = 0.0;
  double s12 = 0.0;
  double s22 = 0.0;
};

Moments moments(const GrayImage& image) {
  Moments m;
  for (int r = 0; r < image.height(); ++r)
    for (int c = 0; c < image.width(); ++c) {
      const double x = image(r, c);
      m.mass += x;
      m.col_mean += x * c;
      m.row_mean += x * r;
    }
  if (!(m.mass > 0.0)) throw Error(ErrorCode::ZeroMass, "image has no intensity mass");
  m.col_mean /= m.mass;
  m.row_mean /= m.mass;
  for (int r = 0; r < image.height(); ++r)
    for (int c = 0; c < image.width(); ++c) {
      const double x = image(r, c);
      const double dr = r - m.row_mean;
      m.s12 += x * (c - m.col_mean) * dr;
      m.s22 += x * dr * dr;
    }
  return m;
}

// Mass spread uniformly over unit-wide footprints: the CDF of a boundary sweeping across
// them is piecewise linear with breakpoints at the footprint edges.
class SweepCdf {
 public:
  void add(double centre, double mass) {
    if (mass <= 0.0) return;
    events_.push_back({centre - 0.5, mass});
    events_.push_back({centre + 0.5, -mass});
    total_ += mass;
  }

  double total() const noexcept { return total_; }

  // Leftmost position where the CDF reaches `target`.
  double position(double target) {
    if (!sorted_) {
      std::sort(events_.begin(), events_.end());
      sorted_ = true;
    }
    double cdf = 0.0, slope = 0.0;
    for (std::size_t k = 0; k + 1 < events_.size(); ++k) {
      slope += events_[k].second;
      const double span = events_[k + 1].first - events_[k].first;
      const double next = cdf + slope * span;
      if (next >= target && slope > 0.0)
        return events_[k].first + std::clamp((target - cdf) / slope, 0.0, span);
      cdf = next;
    }
    return events_.back().first;
  }

  double interval_length(double mass) {
    const double tail = (1.0 - mass) / 2.0 * total_;
    return position(total_ - tail) - position(tail);
  }

 private:
  std::vector<std::pair<double, double>> events_;
  double total_ = 0.0;
  bool sorted_ = false;
};

}  // namespace

PipelineProducts run_pipeline(const GrayImage& image, int factor) {
  PipelineProducts p;
  p.factor = factor;
  p.binary = binarize(upscale(image, factor));
  p.distance = edt(p.binary);
  p.skeleton = skeletonize(p.binary, p.distance);
  return p;
}

double stroke_length(const Skeleton& skeleton, int factor) {
  if (skeleton.empty()) throw Error(ErrorCode::EmptySkeleton, "stroke length of an empty skeleton");
  if (factor < 1) throw Error(ErrorCode::InvalidArgument, "scale factor must be >= 1");
  const double diagonal = std::sqrt(2.0);
  double total = 0.0;
  // East, south-east, south and south-west visit every unordered pair exactly once.
  for (const auto& p : skeleton.pixels) {
    total += skeleton.contains(p.row, p.col + 1) ? 1.0 : 0.0;
    total += skeleton.contains(p.row + 1, p.col + 1) ? diagonal : 0.0;
    total += skeleton.contains(p.row + 1, p.col) ? 1.0 : 0.0;
    total += skeleton.contains(p.row + 1, p.col - 1) ? diagonal : 0.0;
  }
  return total / factor;
}

double stroke_length(const PipelineProducts& products) { return stroke_length(products.skeleton, products.factor); }

double stroke_thickness(const Skeleton& skeleton, int factor) {
  if (skeleton.empty()) throw Error(ErrorCode::EmptySkeleton, "stroke thickness of an empty skeleton");
  if (factor < 1) throw Error(ErrorCode::InvalidArgument, "scale factor must be >= 1");
  const double mean = std::accumulate(skeleton.radius.begin(), skeleton.radius.end(), 0.0) /
                      static_cast<double>(skeleton.radius.size());
  return 2.0 * mean / factor;
}

double stroke_thickness(const PipelineProducts& products) {
  return stroke_thickness(products.skeleton, products.factor);
}

double slant(const GrayImage& image) {
  const Moments m = moments(image);
  if (m.s22 == 0.0) throw Error(ErrorCode::DegenerateRow, "all image mass lies on a single row");
  return std::atan(-m.s12 / m.s22);
}

Extent bounding_parallelogram(const GrayImage& image, double slant_radians, double mass) {
  if (!(mass > 0.0 && mass <= 1.0)) throw Error(ErrorCode::InvalidArgument, "mass fraction must be in (0, 1]");
  const Moments m = moments(image);
  const int h = image.height(), w = image.width();

  SweepCdf rows, cols;
  // Undo the shear: a pixel at (r, c) sits at abscissa c + (r - row_mean) * tan(slant)
  // once the glyph is upright.
  const double shear = std::tan(slant_radians);
  for (int r = 0; r < h; ++r) {
    const double offset = (r - m.row_mean) * shear;
    double row_mass = 0.0;
    for (int c = 0; c < w; ++c) {
      const double x = image(r, c);
      row_mass += x;
      cols.add(c + offset, x);
    }
    rows.add(r, row_mass);
  }
  return {cols.interval_length(mass), rows.interval_length(mass)};
}

MorphometryRecord measure(const GrayImage& image, int factor) {
  MorphometryRecord rec;
  const char* stage = "pipeline";
  try {
    const PipelineProducts p = run_pipeline(image, factor);
    stage = "length";
    rec.length = stroke_length(p);
    stage = "thickness";
    rec.thickness = stroke_thickness(p);
    stage = "slant";
    rec.slant = slant(image);
    stage = "width/height";
    const Extent e = bounding_parallelogram(image, rec.slant);
    rec.width = e.width;
    rec.height = e.height;
  } catch (const Error& e) {
    throw Error(e.code(), std::string(stage) + ": " + e.what());
  }
  return rec;
}

}  // namespace morpho
