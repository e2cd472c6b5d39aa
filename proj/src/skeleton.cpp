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
#include <algorithm>
#include <array>
#include <bit>
#include <bitset>
#include <cmath>
#include <queue>
#include <utility>

#include "raster.hpp"

namespace morpho {
namespace {

// Clockwise from north.
constexpr std::array<int, 8> kDr = {-1, -1, 0, 1, 1, 1, 0, -1};
constexpr std::array<int, 8> kDc = {0, 1, 1, 1, 0, -1, -1, -1};

int find(std::array<int, 8>& parent, int i) {
  while (parent[i] != i) i = parent[i] = parent[parent[i]];
  return i;
}

// Counts components among the neighbours selected by `members`, where two
// neighbours are joined when `adjacent` says so. With `touching` set, only
// components containing a 4-neighbour of the centre are counted.
template <typename Adjacent>
int ring_components(unsigned members, Adjacent adjacent, bool touching) {
  std::array<int, 8> parent;
  for (int i = 0; i < 8; ++i) parent[i] = i;
  for (int a = 0; a < 8; ++a)
    for (int b = a + 1; b < 8; ++b)
      if ((members >> a & 1) && (members >> b & 1) && adjacent(a, b)) parent[find(parent, a)] = find(parent, b);
  std::bitset<8> roots;
  for (int i = 0; i < 8; ++i) {
    if (!(members >> i & 1)) continue;
    if (touching && (i % 2) != 0) continue;  // even indices are N, E, S, W
    roots.set(find(parent, i));
  }
  return static_cast<int>(roots.count());
}

// Simple point under (8, 4) connectivity: exactly one 8-connected foreground
// component in the ring and exactly one 4-connected background component that
// is 4-adjacent to the centre.
std::array<bool, 256> build_simple_table() {
  std::array<bool, 256> table{};
  auto chebyshev1 = [](int a, int b) {
    return std::max(std::abs(kDr[a] - kDr[b]), std::abs(kDc[a] - kDc[b])) == 1;
  };
  auto manhattan1 = [](int a, int b) { return std::abs(kDr[a] - kDr[b]) + std::abs(kDc[a] - kDc[b]) == 1; };
  for (unsigned code = 0; code < 256; ++code) {
    const int fg = ring_components(code, chebyshev1, false);
    const int bg = ring_components(~code & 0xFFu, manhattan1, true);
    table[code] = fg == 1 && bg == 1;
  }
  return table;
}

// One neighbour, or two neighbours touching each other: the tip of a one or two pixel wide line.
// Without the second form a two pixel wide ridge unzips from one end when scanned across its width.
bool is_tip(unsigned code) {
  if (std::popcount(code) == 1) return true;
  if (std::popcount(code) != 2) return false;
  const int a = std::countr_zero(code), b = std::countr_zero(code & (code - 1));
  return std::max(std::abs(kDr[a] - kDr[b]), std::abs(kDc[a] - kDc[b])) == 1;
}

const std::array<bool, 256>& simple_table() {
  static const std::array<bool, 256> table = build_simple_table();
  return table;
}

}  // namespace

Skeleton skeletonize(const BinaryImage& image, const DistanceMap& distance) {
  if (distance.height() != image.height() || distance.width() != image.width())
    throw Error(ErrorCode::DimensionMismatch, "distance map does not match the binary image");
  const int h = image.height(), w = image.width();

  BinaryImage mask = image;
  auto neighbour_code = [&](int r, int c) {
    unsigned code = 0;
    for (int k = 0; k < 8; ++k) {
      const int nr = r + kDr[k], nc = c + kDc[k];
      if (mask.contains(nr, nc) && mask(nr, nc)) code |= 1u << k;
    }
    return code;
  };

  // An end point is kept only if no nearby inscribed disc nearly swallows its own, i.e.
  // it lies on a ridge of the distance map. Distances on the lattice are off by up to
  // about half a pixel each, so farther witnesses get a full pixel of slack; otherwise
  // single-pixel boundary bumps grow spurs all the way to the centre of the shape.
  constexpr int kRidgeReach = 3;
  auto on_ridge = [&](int r, int c) {
    const double d = distance(r, c);
    for (int dr = -kRidgeReach; dr <= kRidgeReach; ++dr)
      for (int dc = -kRidgeReach; dc <= kRidgeReach; ++dc) {
        const int nr = r + dr, nc = c + dc;
        if ((dr == 0 && dc == 0) || !image.contains(nr, nc) || !image(nr, nc)) continue;
        const double gap = std::hypot(dr, dc);
        const double slack = gap < 2.0 ? 0.5 : 1.0;
        if (distance(nr, nc) >= d + gap - slack) return false;
      }
    return true;
  };

  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  bool any = false;
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      if (image(r, c)) {
        queue.emplace(distance(r, c), image.index(r, c));
        any = true;
      }
  if (!any) throw Error(ErrorCode::EmptyForeground, "nothing to skeletonise");

  const auto& simple = simple_table();
  while (!queue.empty()) {
    const std::size_t idx = queue.top().second;
    queue.pop();
    const int r = static_cast<int>(idx / w), c = static_cast<int>(idx % w);
    if (!mask(r, c)) continue;
    const unsigned code = neighbour_code(r, c);
    if (!simple[code]) continue;
    if (is_tip(code) && on_ridge(r, c)) continue;
    mask(r, c) = 0;
    for (int k = 0; k < 8; ++k) {
      const int nr = r + kDr[k], nc = c + kDc[k];
      if (mask.contains(nr, nc) && mask(nr, nc)) queue.emplace(distance(nr, nc), mask.index(nr, nc));
    }
  }

  Skeleton sk;
  sk.height = h;
  sk.width = w;
  sk.mask = std::move(mask);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      if (sk.mask(r, c)) {
        sk.pixels.push_back({r, c});
        sk.radius.push_back(distance(r, c));
      }
  return sk;
}

}  // namespace morpho
