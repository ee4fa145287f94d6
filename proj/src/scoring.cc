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

#include "maskprune/scoring.h"

#include <algorithm>
#include <exception>
#include <numbers>
#include <thread>
#include <unordered_map>

#include "maskprune/errors.h"

namespace maskprune {

namespace {

void score_one(const InstanceRecord &inst, CrowdPolicy crowd, InstanceScore &out,
               std::string &warning) {
  out.instance_id = inst.id;
  out.image_id = inst.image_id;
  out.category_id = inst.category_id;
  if (inst.is_crowd && crowd == CrowdPolicy::kSkip) {
    out.skipped = true;
    return;
  }
  try {
    out.metrics = instance_metrics(inst.mask);
    if (out.metrics.degenerate()) {
      out.degenerate = true;
      warning = "annotation " + std::to_string(inst.id) + ": zero-area mask";
      return;
    }
    out.raw_scs = scs(out.metrics);
    out.si_scs = si_scs(out.metrics);
  } catch (const std::exception &e) {
    out.metrics = {};
    out.raw_scs = out.si_scs = 0.0;
    out.degenerate = true;
    warning = "annotation " + std::to_string(inst.id) + ": " + e.what();
  }
}

std::vector<InstanceScore> instance_phase(const Dataset &dataset, const ScoreOptions &options,
                                          std::vector<std::string> &notes) {
  const std::size_t n = dataset.instances.size();
  std::vector<InstanceScore> out(n);
  notes.assign(n, std::string());
  const std::size_t workers =
      std::clamp<std::size_t>(options.workers, 1, std::max<std::size_t>(n, 1));

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      score_one(dataset.instances[i], options.crowd, out[i], notes[i]);
    }
  };
  if (workers == 1) {
    work(0, n);
    return out;
  }
  // Each worker owns a contiguous slice; nothing is shared but read-only input.
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(n, w * chunk);
    const std::size_t end = std::min(n, begin + chunk);
    pool.emplace_back(work, begin, end);
  }
  pool.clear();
  return out;
}

}  // namespace

double scs(const ShapeMetrics &metrics) {
  if (metrics.degenerate()) throw DegenerateGeometryError("SCS of a zero-area mask");
  return metrics.perimeter / metrics.area;
}

double si_scs(const ShapeMetrics &metrics) {
  if (metrics.degenerate()) throw DegenerateGeometryError("SI-SCS of a zero-area mask");
  return metrics.perimeter * metrics.perimeter / (4.0 * std::numbers::pi * metrics.area);
}

void cb_normalize(std::span<InstanceScore> scores) {
  struct Range {
    double lo = 0.0;
    double hi = 0.0;
    bool any = false;
  };
  std::unordered_map<CategoryId, Range> ranges;
  for (const InstanceScore &s : scores) {
    if (!s.scored()) continue;
    Range &r = ranges[s.category_id];
    if (!r.any) {
      r = {s.si_scs, s.si_scs, true};
    } else {
      r.lo = std::min(r.lo, s.si_scs);
      r.hi = std::max(r.hi, s.si_scs);
    }
  }
  for (InstanceScore &s : scores) {
    if (!s.scored()) {
      s.cb_scs = 0.0;
      continue;
    }
    const Range &r = ranges.at(s.category_id);
    s.cb_scs = r.hi > r.lo ? (s.si_scs - r.lo) / (r.hi - r.lo) : 1.0;
  }
}

double stage_value(const InstanceScore &score, ScoreStage stage) {
  if (!score.scored()) return 0.0;
  switch (stage) {
    case ScoreStage::kScs:
      return score.raw_scs;
    case ScoreStage::kSi:
      return score.si_scs;
    case ScoreStage::kCb:
      return score.cb_scs;
  }
  return 0.0;
}

std::vector<ImageScore> image_scores(const Dataset &dataset,
                                     std::span<const InstanceScore> scores, ScoreStage stage) {
  // Summation runs in ascending instance_id so the result does not depend on
  // annotation order.
  std::vector<const InstanceScore *> ordered;
  ordered.reserve(scores.size());
  for (const InstanceScore &s : scores) ordered.push_back(&s);
  std::sort(ordered.begin(), ordered.end(),
            [](const InstanceScore *a, const InstanceScore *b) {
              return a->instance_id < b->instance_id;
            });

  std::vector<ImageScore> out;
  out.reserve(dataset.images.size());
  std::unordered_map<ImageId, std::size_t> pos;
  for (const ImageRecord &img : dataset.images) out.push_back({img.id, 0.0, 0});
  std::sort(out.begin(), out.end(),
            [](const ImageScore &a, const ImageScore &b) { return a.image_id < b.image_id; });
  for (std::size_t i = 0; i < out.size(); ++i) pos.emplace(out[i].image_id, i);

  for (const InstanceScore *s : ordered) {
    auto it = pos.find(s->image_id);
    if (it == pos.end()) continue;
    ImageScore &img = out[it->second];
    img.value += stage_value(*s, stage);
    ++img.instance_count;
  }
  return out;
}

std::vector<InstanceScore> score_instances(const Dataset &dataset, const ScoreOptions &options,
                                           std::vector<std::string> *warnings) {
  std::vector<std::string> notes;
  std::vector<InstanceScore> out = instance_phase(dataset, options, notes);
  if (warnings != nullptr) {
    for (std::string &note : notes) {
      if (!note.empty()) warnings->push_back(std::move(note));
    }
  }
  return out;
}

ScoreReport score_dataset(const Dataset &dataset, const ScoreOptions &options,
                          ScoreStage stage) {
  std::vector<std::string> notes;
  std::vector<InstanceScore> scores = instance_phase(dataset, options, notes);

  std::vector<std::size_t> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a].instance_id < scores[b].instance_id;
  });

  ScoreReport report;
  report.instances.reserve(order.size());
  for (std::size_t i : order) {
    report.instances.push_back(scores[i]);
    if (!notes[i].empty()) report.warnings.push_back(std::move(notes[i]));
  }
  cb_normalize(report.instances);
  report.images = image_scores(dataset, report.instances, stage);
  return report;
}

}  // namespace maskprune
