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

#ifndef MASKPRUNE_SELECTOR_H_
#define MASKPRUNE_SELECTOR_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "maskprune/dataset.h"
#include "maskprune/scoring.h"

namespace maskprune {

enum class SelectionMethod { kScsTopK, kRandom };

std::string_view to_string(SelectionMethod method);

struct SelectionResult {
  std::vector<ImageId> kept_image_ids;  // rank order, best first
  double pruning_rate = 0.0;            // fraction of images removed
  std::size_t k = 0;
  SelectionMethod method = SelectionMethod::kScsTopK;
};

/// Number of images kept when removing fraction `pruning_rate` of
/// `total`: (1 - p) * D rounded half up. Throws ArgumentError unless
/// 0 <= p < 1.
std::size_t kept_count(std::size_t total, double pruning_rate);

/// Keeps the K best images ordered by (score descending, image_id ascending).
SelectionResult select_top_k(std::span<const ImageScore> image_scores, double pruning_rate);

/// Uniform sample of K images without replacement. The generator is
/// mt19937_64 with a fixed bounded-integer mapping, so a seed selects the same
/// images on every platform.
SelectionResult select_random(std::span<const ImageId> image_ids, double pruning_rate,
                              std::uint64_t seed);

/// Copy of `dataset` restricted to the selected images and their instances.
Dataset prune(const Dataset &dataset, const SelectionResult &selection);

}  // namespace maskprune

#endif  // MASKPRUNE_SELECTOR_H_
