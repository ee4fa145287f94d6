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

#include "maskprune/selector.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <unordered_set>

#include "maskprune/errors.h"

namespace maskprune {

namespace {

// Lemire's nearly-divisionless bounded integer in [0, bound).
std::uint64_t bounded(std::mt19937_64 &rng, std::uint64_t bound) {
  __uint128_t m = static_cast<__uint128_t>(rng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      m = static_cast<__uint128_t>(rng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

void check_rate(double pruning_rate) {
  if (!(pruning_rate >= 0.0 && pruning_rate < 1.0)) {
    throw ArgumentError("pruning rate must be in [0, 1), got " + std::to_string(pruning_rate));
  }
}

}  // namespace

std::string_view to_string(SelectionMethod method) {
  return method == SelectionMethod::kRandom ? "random" : "scs-topk";
}

std::size_t kept_count(std::size_t total, double pruning_rate) {
  check_rate(pruning_rate);
  // The epsilon absorbs representation error in p (0.7 * 5 must round to 4).
  const double exact = (1.0 - pruning_rate) * static_cast<double>(total);
  const auto k = static_cast<std::size_t>(std::floor(exact + 0.5 + 1e-9));
  return std::min(k, total);
}

SelectionResult select_top_k(std::span<const ImageScore> image_scores, double pruning_rate) {
  SelectionResult result;
  result.method = SelectionMethod::kScsTopK;
  result.pruning_rate = pruning_rate;
  result.k = kept_count(image_scores.size(), pruning_rate);

  std::vector<const ImageScore *> ranked;
  ranked.reserve(image_scores.size());
  for (const ImageScore &s : image_scores) ranked.push_back(&s);
  std::sort(ranked.begin(), ranked.end(), [](const ImageScore *a, const ImageScore *b) {
    if (a->value != b->value) return a->value > b->value;
    return a->image_id < b->image_id;
  });
  result.kept_image_ids.reserve(result.k);
  for (std::size_t i = 0; i < result.k; ++i) result.kept_image_ids.push_back(ranked[i]->image_id);
  return result;
}

SelectionResult select_random(std::span<const ImageId> image_ids, double pruning_rate,
                              std::uint64_t seed) {
  SelectionResult result;
  result.method = SelectionMethod::kRandom;
  result.pruning_rate = pruning_rate;
  result.k = kept_count(image_ids.size(), pruning_rate);

  std::vector<ImageId> pool(image_ids.begin(), image_ids.end());
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates: the first k slots are the sample.
  for (std::size_t i = 0; i < result.k; ++i) {
    const std::size_t j = i + bounded(rng, pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(result.k);
  result.kept_image_ids = std::move(pool);
  return result;
}

Dataset prune(const Dataset &dataset, const SelectionResult &selection) {
  const DatasetIndex index(dataset);
  std::unordered_set<ImageId> keep;
  for (ImageId id : selection.kept_image_ids) {
    if (!index.has_image(id)) {
      throw ArgumentError("selected image id " + std::to_string(id) + " is not in the dataset");
    }
    keep.insert(id);
  }
  Dataset out;
  out.categories = dataset.categories;
  out.passthrough = dataset.passthrough;
  for (const ImageRecord &img : dataset.images) {
    if (keep.contains(img.id)) out.images.push_back(img);
  }
  for (const InstanceRecord &inst : dataset.instances) {
    if (keep.contains(inst.image_id)) out.instances.push_back(inst);
  }
  return out;
}

}  // namespace maskprune
