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

#ifndef MASKPRUNE_SCORING_H_
#define MASKPRUNE_SCORING_H_

#include <span>
#include <string>
#include <vector>

#include "maskprune/dataset.h"
#include "maskprune/geometry.h"

namespace maskprune {

/// Which per-instance value feeds the image score. Mirrors the ablation
/// ladder: raw perimeter/area, scale-invariant, class-balanced.
enum class ScoreStage { kScs, kSi, kCb };

enum class CrowdPolicy { kScore, kSkip };

struct InstanceScore {
  InstanceId instance_id = 0;
  ImageId image_id = 0;
  CategoryId category_id = 0;
  ShapeMetrics metrics;
  double raw_scs = 0.0;  // 1/px
  double si_scs = 0.0;   // dimensionless, 1 for a circle
  double cb_scs = 0.0;   // [0, 1] within the category
  bool degenerate = false;
  bool skipped = false;  // crowd annotation under CrowdPolicy::kSkip

  bool scored() const { return !degenerate && !skipped; }
};

struct ImageScore {
  ImageId image_id = 0;
  double value = 0.0;
  std::size_t instance_count = 0;
};

struct ScoreOptions {
  CrowdPolicy crowd = CrowdPolicy::kScore;
  unsigned workers = 1;
};

struct ScoreReport {
  std::vector<InstanceScore> instances;  // ascending instance_id
  std::vector<ImageScore> images;        // ascending image_id, one per image
  std::vector<std::string> warnings;     // degenerate masks, in instance_id order
};

/// Perimeter over area. Throws DegenerateGeometryError when the area is zero.
double scs(const ShapeMetrics &metrics);

/// Isoperimetric quotient P^2 / (4 pi A): 1 for a circle, 4/pi for a square,
/// unchanged by uniform scaling. Throws DegenerateGeometryError on zero area.
double si_scs(const ShapeMetrics &metrics);

/// Per-category min-max rescaling of si_scs into cb_scs over the whole span.
/// A category whose scored members all share one value maps them to 1.0.
/// Unscored entries get 0 and do not move the category range.
void cb_normalize(std::span<InstanceScore> scores);

double stage_value(const InstanceScore &score, ScoreStage stage);

/// Sums the chosen stage over each image's instances. Every dataset image
/// gets a row, including images without instances (value 0).
std::vector<ImageScore> image_scores(const Dataset &dataset,
                                     std::span<const InstanceScore> scores,
                                     ScoreStage stage = ScoreStage::kCb);

/// Metrics, SCS and SI for every instance; parallel over `workers` threads.
/// Output is in dataset order and independent of the worker count.
std::vector<InstanceScore> score_instances(const Dataset &dataset, const ScoreOptions &options,
                                           std::vector<std::string> *warnings = nullptr);

/// End-to-end scoring: instance phase, then class balancing and image sums.
ScoreReport score_dataset(const Dataset &dataset, const ScoreOptions &options = {},
                          ScoreStage stage = ScoreStage::kCb);

}  // namespace maskprune

#endif  // MASKPRUNE_SCORING_H_
