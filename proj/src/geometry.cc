// Copyright (c) 2026, The maskprune Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "maskprune/geometry.h"

#include <cmath>
#include <string>
#include <type_traits>

#include "maskprune/errors.h"

namespace maskprune {

namespace {

constexpr double kDegenerateAreaRatio = 1e-12;

void check_ring(std::span<const Point> ring) {
  if (ring.size() < 3) {
    throw DegenerateGeometryError("polygon ring has " + std::to_string(ring.size()) +
                                  " vertices, need at least 3");
  }
  for (const Point &p : ring) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw GeometryError("polygon ring has a non-finite vertex");
    }
  }
}

}  // namespace

BitMask::BitMask(int height, int width) : height_(height), width_(width) {
  if (height < 0 || width < 0) {
    throw GeometryError("mask dimensions must be non-negative");
  }
  bits_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), 0);
}

bool ShapeMetrics::degenerate() const {
  return !(area > kDegenerateAreaRatio * perimeter * perimeter) || !(area > 0.0);
}

double polygon_area(std::span<const Point> ring) {
  check_ring(ring);
  // Shoelace about the first vertex; same value, less cancellation far from
  // the origin.
  const Point origin = ring.front();
  double twice = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Point &a = ring[k];
    const Point &b = ring[(k + 1) % n];
    twice += (a.x - origin.x) * (b.y - origin.y) - (b.x - origin.x) * (a.y - origin.y);
  }
  return std::abs(twice) / 2.0;
}

double polygon_perimeter(std::span<const Point> ring) {
  check_ring(ring);
  double length = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Point &a = ring[k];
    const Point &b = ring[(k + 1) % n];
    length += std::hypot(b.x - a.x, b.y - a.y);
  }
  return length;
}

ShapeMetrics polygon_set_metrics(const PolygonSet &mask) {
  if (mask.rings.empty()) {
    throw DegenerateGeometryError("polygon set has no rings");
  }
  ShapeMetrics m;
  for (const Ring &ring : mask.rings) {
    m.perimeter += polygon_perimeter(ring);
    m.area += polygon_area(ring);
  }
  return m;
}

ShapeMetrics raster_metrics(const BitMask &mask) {
  const int h = mask.height();
  const int w = mask.width();
  auto bits = mask.column_major();
  std::size_t area = 0;
  std::size_t shared = 0;  // 4-adjacent pairs of set pixels
  for (int c = 0; c < w; ++c) {
    const std::size_t base = static_cast<std::size_t>(c) * h;
    for (int r = 0; r < h; ++r) {
      if (!bits[base + r]) continue;
      ++area;
      if (r + 1 < h && bits[base + r + 1]) ++shared;
      if (c + 1 < w && bits[base + h + r]) ++shared;
    }
  }
  return {static_cast<double>(4 * area - 2 * shared), static_cast<double>(area)};
}

ShapeMetrics instance_metrics(const MaskGeometry &mask) {
  return std::visit(
      [](const auto &m) -> ShapeMetrics {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PolygonSet>) {
          return polygon_set_metrics(m);
        } else {
          return raster_metrics(rle_decode(m.runs, m.height, m.width));
        }
      },
      mask);
}

}  // namespace maskprune
