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

#ifndef MASKPRUNE_STATS_H_
#define MASKPRUNE_STATS_H_

#include <span>
#include <string>
#include <vector>

#include "maskprune/dataset.h"

namespace maskprune {

struct ClassCount {
  CategoryId category_id = 0;
  std::string name;
  std::size_t count = 0;
};

/// Instances per category, in category order; categories without instances
/// report zero.
std::vector<ClassCount> class_histogram(const Dataset &dataset);

/// Buckets [0, e0), [e0, e1), ..., [e_last, inf) over recomputed mask areas.
struct AreaHistogram {
  std::vector<double> edges;
  std::vector<std::size_t> counts;  // edges.size() + 1 buckets
  std::size_t degenerate = 0;       // zero-area or unmeasurable masks
};

/// COCO small/medium split points 32^2 and 96^2 plus powers of four.
std::vector<double> default_area_edges();

/// Throws ArgumentError unless edges are positive and strictly ascending.
AreaHistogram area_distribution(const Dataset &dataset, std::span<const double> edges);

struct ClassAreaQuartiles {
  CategoryId category_id = 0;
  std::size_t count = 0;  // measurable instances
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

/// Linear-interpolated quartiles of mask area per category.
std::vector<ClassAreaQuartiles> class_area_quartiles(const Dataset &dataset);

struct DistributionReport {
  std::size_t image_count = 0;
  std::size_t instance_count = 0;
  std::vector<ClassCount> classes;
  AreaHistogram areas;
  std::vector<ClassAreaQuartiles> quartiles;
  /// Images bucketed by instance count; index = instances per image.
  std::vector<std::size_t> instances_per_image;
};

DistributionReport distribution_report(const Dataset &dataset, std::span<const double> edges);

struct ClassRetention {
  CategoryId category_id = 0;
  std::string name;
  std::size_t full_count = 0;
  std::size_t kept_count = 0;
  double fraction = 0.0;  // NaN when the class has no instances in `full`
};

/// Per-class share of instances that survive pruning. Throws IntegrityError
/// when `pruned` has a category that `full` lacks.
std::vector<ClassRetention> coverage_delta(const Dataset &full, const Dataset &pruned);

}  // namespace maskprune

#endif  // MASKPRUNE_STATS_H_
