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
#include "perturbations.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "json.hpp"
#include "parallel.hpp"

namespace morpho {
namespace {

double high_res_thickness(const Skeleton& skeleton) { return stroke_thickness(skeleton, 1); }

void require_skeleton(const PipelineProducts& products) {
  if (products.skeleton.empty()) throw Error(ErrorCode::EmptySkeleton, "perturbation needs a skeleton");
}

bool any_foreground(const BinaryImage& image) {
  return std::any_of(image.data().begin(), image.data().end(), [](auto v) { return v != 0; });
}

double distance_to_segment(double r, double c, const Point& a, const Point& b) {
  const double vr = b.row - a.row, vc = b.col - a.col;
  const double len2 = vr * vr + vc * vc;
  double t = len2 > 0 ? ((r - a.row) * vr + (c - a.col) * vc) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(r - (a.row + t * vr), c - (a.col + t * vc));
}

void erase_stroke(BinaryImage& image, const Point& a, const Point& b, double brush_radius) {
  const int r0 = std::max(0, static_cast<int>(std::floor(std::min(a.row, b.row) - brush_radius)));
  const int r1 = std::min(image.height() - 1, static_cast<int>(std::ceil(std::max(a.row, b.row) + brush_radius)));
  const int c0 = std::max(0, static_cast<int>(std::floor(std::min(a.col, b.col) - brush_radius)));
  const int c1 = std::min(image.width() - 1, static_cast<int>(std::ceil(std::max(a.col, b.col) + brush_radius)));
  for (int r = r0; r <= r1; ++r)
    for (int c = c0; c <= c1; ++c)
      if (distance_to_segment(r, c, a, b) <= brush_radius) image(r, c) = 0;
}

// Principal direction of the skeleton pixels inside a square window centred on `site`.
double local_direction(const Skeleton& skeleton, Pixel site, int half) {
  double n = 0, mr = 0, mc = 0;
  std::vector<Pixel> inside;
  for (int r = site.row - half; r <= site.row + half; ++r)
    for (int c = site.col - half; c <= site.col + half; ++c)
      if (skeleton.contains(r, c)) {
        inside.push_back({r, c});
        n += 1;
        mr += r;
        mc += c;
      }
  mr /= n;
  mc /= n;
  double scc = 0, srr = 0, src = 0;
  for (const auto& p : inside) {
    scc += (p.col - mc) * (p.col - mc);
    srr += (p.row - mr) * (p.row - mr);
    src += (p.row - mr) * (p.col - mc);
  }
  return 0.5 * std::atan2(2.0 * src, scc - srr);
}

}  // namespace

const char* to_string(PerturbKind kind) noexcept {
  switch (kind) {
    case PerturbKind::Identity: return "plain";
    case PerturbKind::Thin: return "thin";
    case PerturbKind::Thicken: return "thick";
    case PerturbKind::Swell: return "swel";
    case PerturbKind::Fracture: return "frac";
  }
  return "unknown";
}

void PerturbSpec::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); };
  switch (kind) {
    case PerturbKind::Identity: break;
    case PerturbKind::Thin:
    case PerturbKind::Thicken:
      if (!(amount > 0.0) || !std::isfinite(amount)) fail("thin/thicken amount must be positive");
      break;
    case PerturbKind::Swell:
      if (!(strength > 1.0) || !std::isfinite(strength)) fail("swell strength must exceed 1");
      if (!(radius_coef > 0.0) || !std::isfinite(radius_coef)) fail("swell radius coefficient must be positive");
      break;
    case PerturbKind::Fracture:
      if (count < 0) fail("fracture count must be >= 0");
      if (!(brush > 0.0) || !(min_distance > 0.0) || !(window > 0.0) || !(extension > 0.0))
        fail("fracture brush, min_distance, window and extension must be positive");
      break;
    default: fail("unknown perturbation kind");
  }
}

BinaryImage thin(const PipelineProducts& products, double amount) {
  require_skeleton(products);
  const double radius = amount * high_res_thickness(products.skeleton) / 2.0;
  BinaryImage out = erode_disc(products.binary, radius);
  if (!any_foreground(out)) throw Error(ErrorCode::EmptyResult, "thinning erased the whole glyph");
  return out;
}

BinaryImage thicken(const PipelineProducts& products, double amount) {
  require_skeleton(products);
  return dilate_disc(products.binary, amount * high_res_thickness(products.skeleton) / 2.0);
}

GrayImage swell_at(const GrayImage& source, Pixel center, double radius, double strength) {
  const double exponent = strength - 1.0;
  return warp_backward(source, [&](int r, int c) -> Point {
    const double dr = r - center.row, dc = c - center.col;
    const double d = std::hypot(dr, dc);
    if (d >= radius) return {static_cast<double>(r), static_cast<double>(c)};
    const double scale = std::pow(d / radius, exponent);
    return {center.row + dr * scale, center.col + dc * scale};
  });
}

std::pair<GrayImage, PerturbOutcome> swell(const PipelineProducts& products, double strength, double radius_coef,
                                           Rng& rng) {
  require_skeleton(products);
  const auto& sk = products.skeleton;
  const Pixel center = sk.pixels[rng.uniform_index(sk.pixels.size())];
  const double thickness = stroke_thickness(sk, products.factor);
  const double radius = radius_coef * std::sqrt(thickness) * products.factor;

  PerturbOutcome outcome;
  outcome.kind = PerturbKind::Swell;
  outcome.swell_center = center;
  outcome.radius = radius;
  return {swell_at(to_gray(products.binary), center, radius, strength), outcome};
}

std::vector<Pixel> fracture_candidates(const Skeleton& skeleton, double min_distance) {
  std::vector<Pixel> landmarks;
  for (const auto& p : skeleton.pixels) {
    const int deg = skeleton.degree(p);
    if (deg == 1 || deg >= 3) landmarks.push_back(p);
  }
  std::vector<Pixel> out;
  const double limit2 = min_distance * min_distance;
  for (const auto& p : skeleton.pixels) {
    const bool clear = std::all_of(landmarks.begin(), landmarks.end(), [&](const Pixel& q) {
      const double dr = p.row - q.row, dc = p.col - q.col;
      return dr * dr + dc * dc > limit2;
    });
    if (clear) out.push_back(p);
  }
  return out;
}

std::pair<BinaryImage, PerturbOutcome> fracture(const PipelineProducts& products, const PerturbSpec& spec, Rng& rng) {
  require_skeleton(products);
  const int f = products.factor;
  PerturbOutcome outcome;
  outcome.kind = PerturbKind::Fracture;
  outcome.fractures_requested = spec.count;
  BinaryImage out = products.binary;
  if (spec.count == 0) return {out, outcome};

  std::vector<Pixel> candidates = fracture_candidates(products.skeleton, spec.min_distance * f);
  if (candidates.empty()) throw Error(ErrorCode::NoCandidateSites, "no skeleton pixel is clear of tips and forks");

  // Partial Fisher-Yates: the first `chosen` entries become a uniform sample without replacement.
  const std::size_t chosen = std::min<std::size_t>(static_cast<std::size_t>(spec.count), candidates.size());
  for (std::size_t i = 0; i < chosen; ++i) {
    const std::size_t j = i + rng.uniform_index(candidates.size() - i);
    std::swap(candidates[i], candidates[j]);
  }

  const int half_window = static_cast<int>(spec.window * f / 2.0);
  const double brush_radius = spec.brush * f / 2.0;
  for (std::size_t i = 0; i < chosen; ++i) {
    const Pixel site = candidates[i];
    FractureRecord rec;
    rec.site = site;
    rec.direction = local_direction(products.skeleton, site, half_window);
    rec.normal = rec.direction + std::numbers::pi / 2.0;
    rec.half_length = products.distance(site.row, site.col) + spec.extension * f;
    const double ur = std::sin(rec.normal), uc = std::cos(rec.normal);
    const Point a{site.row - rec.half_length * ur, site.col - rec.half_length * uc};
    const Point b{site.row + rec.half_length * ur, site.col + rec.half_length * uc};
    erase_stroke(out, a, b, brush_radius);
    outcome.fractures.push_back(rec);
  }
  return {out, outcome};
}

std::pair<GrayImage, PerturbOutcome> perturb_high_res(const GrayImage& image, const PerturbSpec& spec, int factor,
                                                      std::uint64_t seed) {
  spec.validate();
  if (spec.kind == PerturbKind::Identity) {
    PerturbOutcome outcome;
    outcome.spec = spec;
    outcome.seed = seed;
    return {to_gray(binarize(upscale(image, factor))), outcome};
  }

  const PipelineProducts products = run_pipeline(image, factor);
  Rng rng(seed);
  std::pair<GrayImage, PerturbOutcome> result;
  switch (spec.kind) {
    case PerturbKind::Thin:
    case PerturbKind::Thicken: {
      const BinaryImage bin =
          spec.kind == PerturbKind::Thin ? thin(products, spec.amount) : thicken(products, spec.amount);
      result.first = to_gray(bin);
      result.second.kind = spec.kind;
      result.second.radius = spec.amount * high_res_thickness(products.skeleton) / 2.0;
      break;
    }
    case PerturbKind::Swell: result = swell(products, spec.strength, spec.radius_coef, rng); break;
    case PerturbKind::Fracture: {
      auto [bin, outcome] = fracture(products, spec, rng);
      result = {to_gray(bin), std::move(outcome)};
      break;
    }
    case PerturbKind::Identity: break;
  }
  result.second.spec = spec;
  result.second.seed = seed;
  return result;
}

std::pair<GrayImage, PerturbOutcome> perturb_image(const GrayImage& image, const PerturbSpec& spec, int factor,
                                                   std::uint64_t seed) {
  try {
    auto [high, outcome] = perturb_high_res(image, spec, factor, seed);
    return {downscale(high, factor), std::move(outcome)};
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument) throw;
    PerturbOutcome outcome;
    outcome.kind = spec.kind;
    outcome.spec = spec;
    outcome.seed = seed;
    outcome.applied = false;
    outcome.failure = e.code();
    outcome.failure_message = e.what();
    outcome.fractures_requested = spec.kind == PerturbKind::Fracture ? spec.count : 0;
    GrayImage fallback;
    try {
      fallback = downscale(to_gray(binarize(upscale(image, factor))), factor);
    } catch (const Error&) {
      // Not even the plain pipeline applies (e.g. a blank image): pass the input through.
      fallback = image;
      for (auto& v : fallback.data()) v = std::clamp(std::round(v), 0.0, 255.0);
    }
    return {std::move(fallback), std::move(outcome)};
  }
}

std::uint64_t image_seed(std::uint64_t master_seed, std::size_t index) noexcept {
  return derive_seed(master_seed, index);
}

std::uint64_t perturbation_seed(std::uint64_t master_seed, std::size_t index) noexcept {
  return derive_seed(image_seed(master_seed, index), 1);
}

std::size_t menu_choice(std::uint64_t master_seed, std::size_t index, std::size_t menu_size) {
  Rng rng(derive_seed(image_seed(master_seed, index), 0));
  return static_cast<std::size_t>(rng.uniform_index(menu_size));
}

MixedDataset build_mixed_dataset(const ImageDataset& images, const LabelVector& labels,
                                 const std::vector<PerturbSpec>& menu, std::uint64_t master_seed, int factor,
                                 unsigned workers) {
  if (menu.empty()) throw Error(ErrorCode::InvalidArgument, "perturbation menu is empty");
  if (menu.size() > 256) throw Error(ErrorCode::InvalidArgument, "menu positions must fit in an IDX label byte");
  if (!labels.empty() && labels.size() != images.count())
    throw Error(ErrorCode::DimensionMismatch, "label count differs from image count");
  for (const auto& spec : menu) spec.validate();

  const std::size_t n = images.count();
  std::vector<GrayImage> outputs(n);
  MixedDataset mixed;
  mixed.labels = labels;
  mixed.perturbation_labels.resize(n);
  mixed.outcomes.resize(n);
  parallel_for(n, workers, [&](std::size_t i) {
    const std::size_t choice = menu_choice(master_seed, i, menu.size());
    auto [img, outcome] = perturb_image(images.gray(i), menu[choice], factor, perturbation_seed(master_seed, i));
    outputs[i] = std::move(img);
    mixed.perturbation_labels[i] = static_cast<std::uint8_t>(choice);
    mixed.outcomes[i] = std::move(outcome);
  });
  if (n == 0)
    mixed.images = ImageDataset(images.height(), images.width(), {});
  else
    mixed.images = ImageDataset::from_images(outputs);
  return mixed;
}

std::string outcome_to_json(const PerturbOutcome& outcome, std::size_t index, int menu_position) {
  using nlohmann::ordered_json;
  const double deg = 180.0 / std::numbers::pi;
  ordered_json j;
  j["index"] = index;
  if (menu_position >= 0) j["menu"] = menu_position;
  j["kind"] = to_string(outcome.kind);
  j["seed"] = outcome.seed;
  j["applied"] = outcome.applied;
  j["failure"] = outcome.failure == ErrorCode::Ok ? ordered_json(nullptr) : ordered_json(to_string(outcome.failure));
  if (!outcome.failure_message.empty()) j["message"] = outcome.failure_message;

  const PerturbSpec& s = outcome.spec;
  ordered_json params = ordered_json::object();
  switch (outcome.kind) {
    case PerturbKind::Thin:
    case PerturbKind::Thicken: params["amount"] = s.amount; break;
    case PerturbKind::Swell:
      params["strength"] = s.strength;
      params["radius_coef"] = s.radius_coef;
      break;
    case PerturbKind::Fracture:
      params["count"] = s.count;
      params["brush"] = s.brush;
      params["min_distance"] = s.min_distance;
      params["window"] = s.window;
      params["extension"] = s.extension;
      break;
    case PerturbKind::Identity: break;
  }
  j["params"] = params;
  if (outcome.applied && (outcome.kind == PerturbKind::Thin || outcome.kind == PerturbKind::Thicken ||
                          outcome.kind == PerturbKind::Swell))
    j["radius"] = outcome.radius;
  if (outcome.swell_center) j["center"] = {outcome.swell_center->row, outcome.swell_center->col};
  if (outcome.kind == PerturbKind::Fracture) {
    ordered_json sites = ordered_json::array();
    for (const auto& f : outcome.fractures)
      sites.push_back({{"row", f.site.row},
                       {"col", f.site.col},
                       {"direction_deg", f.direction * deg},
                       {"normal_deg", f.normal * deg},
                       {"half_length", f.half_length}});
    j["fractures_requested"] = outcome.fractures_requested;
    j["sites"] = sites;
  }
  return j.dump();
}

}  // namespace morpho
