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

#include "maskprune/synth.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <type_traits>

#include "maskprune/errors.h"

namespace maskprune {

namespace {

constexpr double kPi = std::numbers::pi;

void check_params(const ShapeParams &shape) {
  std::visit(
      [](const auto &s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, CircleShape>) {
          if (s.sides < 3 || !(s.radius > 0)) throw ArgumentError("circle needs sides >= 3, radius > 0");
        } else if constexpr (std::is_same_v<T, SquareShape>) {
          if (!(s.side > 0)) throw ArgumentError("square side must be > 0");
        } else if constexpr (std::is_same_v<T, RectangleShape>) {
          if (!(s.width > 0) || !(s.height > 0)) throw ArgumentError("rectangle sides must be > 0");
        } else {
          if (s.points < 2 || !(s.inner_radius > 0) || !(s.inner_radius < s.outer_radius)) {
            throw ArgumentError("star needs points >= 2 and 0 < inner radius < outer radius");
          }
        }
      },
      shape);
}

Ring box(const Point &c, double w, double h, double rotation) {
  const double cs = std::cos(rotation);
  const double sn = std::sin(rotation);
  const std::array<Point, 4> corners = {{{-w / 2, -h / 2}, {w / 2, -h / 2}, {w / 2, h / 2}, {-w / 2, h / 2}}};
  Ring ring;
  for (const Point &p : corners) {
    ring.push_back({c.x + p.x * cs - p.y * sn, c.y + p.x * sn + p.y * cs});
  }
  return ring;
}

/// Largest distance from the center to a vertex.
double bounding_radius(const ShapeParams &shape) {
  return std::visit(
      [](const auto &s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, CircleShape>) {
          return s.radius;
        } else if constexpr (std::is_same_v<T, SquareShape>) {
          return s.side * std::numbers::sqrt2 / 2;
        } else if constexpr (std::is_same_v<T, RectangleShape>) {
          return std::hypot(s.width, s.height) / 2;
        } else {
          return s.outer_radius;
        }
      },
      shape);
}

void scale_shape(ShapeParams &shape, double k) {
  std::visit(
      [k](auto &s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, CircleShape>) {
          s.radius *= k;
        } else if constexpr (std::is_same_v<T, SquareShape>) {
          s.side *= k;
        } else if constexpr (std::is_same_v<T, RectangleShape>) {
          s.width *= k;
          s.height *= k;
        } else {
          s.outer_radius *= k;
          s.inner_radius *= k;
        }
      },
      shape);
}

// Portable draws; std distributions differ between standard libraries.
double uniform01(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64 &rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

int uniform_int(std::mt19937_64 &rng, int lo, int hi) {
  return lo + static_cast<int>(uniform01(rng) * (hi - lo + 1));
}

std::size_t pick(std::mt19937_64 &rng, const std::vector<double> &cumulative) {
  const double u = uniform01(rng) * cumulative.back();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return std::min<std::size_t>(it - cumulative.begin(), cumulative.size() - 1);
}

std::vector<double> cumulate(const std::vector<double> &weights) {
  std::vector<double> out;
  double acc = 0.0;
  for (double w : weights) {
    if (!(w >= 0)) throw ArgumentError("mixture weights must be non-negative");
    out.push_back(acc += w);
  }
  if (out.empty() || !(acc > 0)) throw ArgumentError("mixture weights must not all be zero");
  return out;
}

// circle, square, rectangle, star weights; category k uses row k % 4.
const std::array<std::vector<double>, 4> kShapeProfiles = {{
    {0.10, 0.20, 0.20, 0.50},
    {0.20, 0.20, 0.50, 0.10},
    {0.60, 0.20, 0.10, 0.10},
    {0.25, 0.25, 0.25, 0.25},
}};

ShapeParams shape_for_area(std::mt19937_64 &rng, std::size_t kind, double area, int circle_sides) {
  switch (kind) {
    case 0: {
      const double n = circle_sides;
      return CircleShape{circle_sides, std::sqrt(2 * area / (n * std::sin(2 * kPi / n)))};
    }
    case 1:
      return SquareShape{std::sqrt(area)};
    case 2: {
      const double aspect = uniform(rng, 1.0, 4.0);
      const double w = std::sqrt(area * aspect);
      return uniform01(rng) < 0.5 ? RectangleShape{w, area / w} : RectangleShape{area / w, w};
    }
    default: {
      const int points = uniform_int(rng, 4, 8);
      const double ratio = uniform(rng, 0.3, 0.7);
      const double outer = std::sqrt(area / (points * ratio * std::sin(kPi / points)));
      return StarShape{points, outer, outer * ratio};
    }
  }
}

}  // namespace

Ring shape_ring(const SynthSpec &spec) {
  check_params(spec.shape);
  const Point c = spec.center;
  return std::visit(
      [&](const auto &s) -> Ring {
        using T = std::decay_t<decltype(s)>;
        Ring ring;
        if constexpr (std::is_same_v<T, CircleShape>) {
          ring.reserve(s.sides);
          for (int k = 0; k < s.sides; ++k) {
            const double a = spec.rotation + 2 * kPi * k / s.sides;
            ring.push_back({c.x + s.radius * std::cos(a), c.y + s.radius * std::sin(a)});
          }
        } else if constexpr (std::is_same_v<T, SquareShape>) {
          ring = box(c, s.side, s.side, spec.rotation);
        } else if constexpr (std::is_same_v<T, RectangleShape>) {
          ring = box(c, s.width, s.height, spec.rotation);
        } else {
          ring.reserve(2 * s.points);
          for (int k = 0; k < 2 * s.points; ++k) {
            const double r = k % 2 == 0 ? s.outer_radius : s.inner_radius;
            const double a = spec.rotation - kPi / 2 + kPi * k / s.points;
            ring.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
          }
        }
        return ring;
      },
      spec.shape);
}

InstanceRecord gen_shape(const SynthSpec &spec, InstanceId id, const ImageRecord &image) {
  Ring ring = shape_ring(spec);
  double x0 = ring[0].x, x1 = ring[0].x, y0 = ring[0].y, y1 = ring[0].y;
  for (const Point &p : ring) {
    if (p.x < 0 || p.y < 0 || p.x > image.width || p.y > image.height) {
      throw ArgumentError("shape for annotation " + std::to_string(id) +
                          " exceeds the bounds of image " + std::to_string(image.id));
    }
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  InstanceRecord inst;
  inst.id = id;
  inst.image_id = image.id;
  inst.category_id = spec.category;
  const double area = polygon_area(ring);
  inst.mask = PolygonSet{{std::move(ring)}};
  inst.extra = Json::object();
  inst.extra["id"] = nullptr;
  inst.extra["image_id"] = nullptr;
  inst.extra["category_id"] = nullptr;
  inst.extra["segmentation"] = nullptr;
  inst.extra["area"] = area;
  inst.extra["bbox"] = Json::array({x0, y0, x1 - x0, y1 - y0});
  inst.extra["iscrowd"] = nullptr;
  return inst;
}

ShapeMetrics analytic_metrics(const SynthSpec &spec) {
  check_params(spec.shape);
  return std::visit(
      [](const auto &s) -> ShapeMetrics {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, CircleShape>) {
          const double n = s.sides;
          return {2 * n * s.radius * std::sin(kPi / n),
                  0.5 * n * s.radius * s.radius * std::sin(2 * kPi / n)};
        } else if constexpr (std::is_same_v<T, SquareShape>) {
          return {4 * s.side, s.side * s.side};
        } else if constexpr (std::is_same_v<T, RectangleShape>) {
          return {2 * (s.width + s.height), s.width * s.height};
        } else {
          // 2p triangles between consecutive outer/inner vertices.
          const double p = s.points;
          const double big = s.outer_radius;
          const double small = s.inner_radius;
          const double edge = std::sqrt(big * big + small * small - 2 * big * small * std::cos(kPi / p));
          return {2 * p * edge, p * big * small * std::sin(kPi / p)};
        }
      },
      spec.shape);
}

Dataset gen_corpus(const CorpusConfig &config) {
  if (config.image_count < 1) throw ArgumentError("corpus needs at least one image");
  if (!(config.min_area > 0) || !(config.max_area >= config.min_area)) {
    throw ArgumentError("area range must satisfy 0 < min_area <= max_area");
  }
  if (!(config.mean_instances >= 1.0)) throw ArgumentError("mean_instances must be >= 1");
  if (config.image_width < 4 || config.image_height < 4) throw ArgumentError("image too small");
  const std::vector<double> class_cdf = cumulate(config.class_mix);
  std::vector<std::vector<double>> shape_cdf;
  for (std::size_t c = 0; c < config.class_mix.size(); ++c) {
    shape_cdf.push_back(cumulate(kShapeProfiles[c % kShapeProfiles.size()]));
  }

  Dataset ds;
  ds.passthrough["info"] = {{"description", "maskprune synthetic corpus"},
                            {"seed", config.seed}};
  ds.passthrough["images"] = nullptr;
  ds.passthrough["annotations"] = nullptr;
  ds.passthrough["categories"] = nullptr;
  for (std::size_t c = 0; c < config.class_mix.size(); ++c) {
    CategoryInfo cat;
    cat.id = static_cast<CategoryId>(c + 1);
    cat.name = c < config.class_names.size() ? config.class_names[c] : "class_" + std::to_string(c + 1);
    cat.extra = {{"supercategory", "shape"}, {"id", nullptr}, {"name", nullptr}};
    ds.categories.push_back(std::move(cat));
  }

  std::mt19937_64 rng(config.seed);
  const double log_lo = std::log(config.min_area);
  const double log_hi = std::log(config.max_area);
  const double limit = std::min(config.image_width, config.image_height) / 2.0 - 1.0;
  const double stop = 1.0 - 1.0 / config.mean_instances;
  InstanceId next_id = 1;
  for (std::size_t i = 0; i < config.image_count; ++i) {
    ImageRecord img;
    img.id = static_cast<ImageId>(i + 1);
    char name[32];
    std::snprintf(name, sizeof(name), "%012lld.jpg", static_cast<long long>(img.id));
    img.file_name = name;
    img.width = config.image_width;
    img.height = config.image_height;
    img.extra = Json::object();

    std::size_t count = 1;
    if (config.fixed_instances) {
      count = *config.fixed_instances;
    } else if (stop > 0) {
      count += static_cast<std::size_t>(std::floor(std::log1p(-uniform01(rng)) / std::log(stop)));
    }
    for (std::size_t j = 0; j < count; ++j) {
      SynthSpec spec;
      const std::size_t cls = pick(rng, class_cdf);
      spec.category = static_cast<CategoryId>(cls + 1);
      const std::size_t kind = pick(rng, shape_cdf[cls]);
      const double area = std::exp(uniform(rng, log_lo, log_hi));
      spec.shape = shape_for_area(rng, kind, area, config.circle_sides);
      spec.rotation = uniform(rng, 0.0, 2 * kPi);
      double reach = bounding_radius(spec.shape);
      if (reach > limit) {
        scale_shape(spec.shape, limit / reach);
        reach = limit;
      }
      spec.center = {uniform(rng, reach + 0.5, config.image_width - reach - 0.5),
                     uniform(rng, reach + 0.5, config.image_height - reach - 0.5)};
      ds.instances.push_back(gen_shape(spec, next_id++, img));
    }
    ds.images.push_back(std::move(img));
  }
  return ds;
}

}  // namespace maskprune
