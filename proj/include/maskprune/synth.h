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

#ifndef MASKPRUNE_SYNTH_H_
#define MASKPRUNE_SYNTH_H_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "maskprune/dataset.h"
#include "maskprune/geometry.h"

namespace maskprune {

/// Regular n-gon inscribed in a circle of `radius`.
struct CircleShape {
  int sides = 360;
  double radius = 0.0;
};

struct SquareShape {
  double side = 0.0;
};

struct RectangleShape {
  double width = 0.0;
  double height = 0.0;
};

/// `points`-pointed star alternating between the outer and inner radius.
struct StarShape {
  int points = 5;
  double outer_radius = 0.0;
  double inner_radius = 0.0;
};

using ShapeParams = std::variant<CircleShape, SquareShape, RectangleShape, StarShape>;

struct SynthSpec {
  ShapeParams shape;
  Point center;
  CategoryId category = 1;
  double rotation = 0.0;  // radians
};

/// Vertices of the shape. Throws ArgumentError for invalid parameters.
Ring shape_ring(const SynthSpec &spec);

/// Polygon instance for `spec` placed on `image`. Throws ArgumentError when a
/// vertex falls outside the image.
InstanceRecord gen_shape(const SynthSpec &spec, InstanceId id, const ImageRecord &image);

/// Closed-form perimeter and area of the polygon shape_ring(spec) describes.
ShapeMetrics analytic_metrics(const SynthSpec &spec);

struct CorpusConfig {
  std::size_t image_count = 100;
  /// Relative class frequencies; category ids are 1..class_mix.size().
  std::vector<double> class_mix = {0.90, 0.09, 0.01};
  std::vector<std::string> class_names;  // defaults to class_1, class_2, ...
  /// Instance areas are log-uniform in [min_area, max_area] px^2.
  double min_area = 64.0;
  double max_area = 40000.0;
  /// Instances per image: 1 + geometric with this mean, unless fixed.
  double mean_instances = 5.0;
  std::optional<std::size_t> fixed_instances;
  int image_width = 640;
  int image_height = 480;
  int circle_sides = 360;
  std::uint64_t seed = 1;
};

/// Seeded long-tailed corpus of polygon instances. Each category draws from
/// its own shape mixture, so classes differ in typical boundary complexity.
Dataset gen_corpus(const CorpusConfig &config);

}  // namespace maskprune

#endif  // MASKPRUNE_SYNTH_H_
