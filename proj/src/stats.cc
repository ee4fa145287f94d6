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

#include "maskprune/stats.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "maskprune/errors.h"
#include "maskprune/geometry.h"

namespace maskprune {

namespace {

/// Area of each instance, or NaN when it cannot be measured.
std::vector<double> instance_areas(const Dataset &dataset) {
  std::vector<double> out;
  out.reserve(dataset.instances.size());
  for (const InstanceRecord &inst : dataset.instances) {
    try {
      const ShapeMetrics m = instance_metrics(inst.mask);
      out.push_back(m.degenerate() ? std::numeric_limits<double>::quiet_NaN() : m.area);
    } catch (const std::exception &) {
      out.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  return out;
}

double quantile(const std::vector<double> &sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - static_cast<double>(lo));
}

AreaHistogram bucket(std::span<const double> areas, std::span<const double> edges) {
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (!(edges[i] > 0) || (i > 0 && !(edges[i] > edges[i - 1]))) {
      throw ArgumentError("area bucket edges must be positive and strictly ascending");
    }
  }
  AreaHistogram h;
  h.edges.assign(edges.begin(), edges.end());
  h.counts.assign(edges.size() + 1, 0);
  for (double a : areas) {
    if (std::isnan(a)) {
      ++h.degenerate;
      continue;
    }
    const auto b = std::upper_bound(edges.begin(), edges.end(), a) - edges.begin();
    ++h.counts[b];
  }
  return h;
}

}  // namespace

std::vector<ClassCount> class_histogram(const Dataset &dataset) {
  std::vector<ClassCount> out;
  std::unordered_map<CategoryId, std::size_t> pos;
  for (const CategoryInfo &cat : dataset.categories) {
    pos.emplace(cat.id, out.size());
    out.push_back({cat.id, cat.name, 0});
  }
  for (const InstanceRecord &inst : dataset.instances) {
    auto it = pos.find(inst.category_id);
    if (it != pos.end()) ++out[it->second].count;
  }
  return out;
}

std::vector<double> default_area_edges() {
  return {16.0, 64.0, 256.0, 1024.0, 4096.0, 9216.0, 16384.0, 65536.0, 262144.0, 1048576.0};
}

AreaHistogram area_distribution(const Dataset &dataset, std::span<const double> edges) {
  return bucket(instance_areas(dataset), edges);
}

std::vector<ClassAreaQuartiles> class_area_quartiles(const Dataset &dataset) {
  const std::vector<double> areas = instance_areas(dataset);
  std::unordered_map<CategoryId, std::vector<double>> by_class;
  for (std::size_t i = 0; i < areas.size(); ++i) {
    if (!std::isnan(areas[i])) by_class[dataset.instances[i].category_id].push_back(areas[i]);
  }
  std::vector<ClassAreaQuartiles> out;
  for (const CategoryInfo &cat : dataset.categories) {
    ClassAreaQuartiles q;
    q.category_id = cat.id;
    auto it = by_class.find(cat.id);
    if (it != by_class.end() && !it->second.empty()) {
      std::vector<double> &v = it->second;
      std::sort(v.begin(), v.end());
      q.count = v.size();
      q.min = v.front();
      q.q1 = quantile(v, 0.25);
      q.median = quantile(v, 0.5);
      q.q3 = quantile(v, 0.75);
      q.max = v.back();
    }
    out.push_back(q);
  }
  return out;
}

DistributionReport distribution_report(const Dataset &dataset, std::span<const double> edges) {
  DistributionReport r;
  r.image_count = dataset.images.size();
  r.instance_count = dataset.instances.size();
  r.classes = class_histogram(dataset);
  r.areas = area_distribution(dataset, edges);
  r.quartiles = class_area_quartiles(dataset);
  const DatasetIndex index(dataset);
  for (const ImageRecord &img : dataset.images) {
    const std::size_t g = index.instances_of(img.id).size();
    if (r.instances_per_image.size() <= g) r.instances_per_image.resize(g + 1, 0);
    ++r.instances_per_image[g];
  }
  return r;
}

std::vector<ClassRetention> coverage_delta(const Dataset &full, const Dataset &pruned) {
  const DatasetIndex full_index(full);
  for (const CategoryInfo &cat : pruned.categories) {
    if (!full_index.has_category(cat.id)) {
      throw IntegrityError("category " + std::to_string(cat.id) +
                           " is in the pruned dataset but not in the full one");
    }
  }
  for (const InstanceRecord &inst : pruned.instances) {
    if (!full_index.has_category(inst.category_id)) {
      throw IntegrityError("pruned annotation " + std::to_string(inst.id) +
                           " has category " + std::to_string(inst.category_id) +
                           " missing from the full dataset");
    }
  }
  const std::vector<ClassCount> before = class_histogram(full);
  std::unordered_map<CategoryId, std::size_t> after;
  for (const InstanceRecord &inst : pruned.instances) ++after[inst.category_id];

  std::vector<ClassRetention> out;
  out.reserve(before.size());
  for (const ClassCount &c : before) {
    ClassRetention r;
    r.category_id = c.category_id;
    r.name = c.name;
    r.full_count = c.count;
    r.kept_count = after.contains(c.category_id) ? after.at(c.category_id) : 0;
    r.fraction = c.count == 0 ? std::numeric_limits<double>::quiet_NaN()
                              : static_cast<double>(r.kept_count) / static_cast<double>(c.count);
    out.push_back(r);
  }
  return out;
}

}  // namespace maskprune
