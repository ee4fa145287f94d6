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

// Acceptance checks for the scoring and pruning pipeline. Prints one PASS or
// FAIL line per criterion and exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "maskprune/cli.h"
#include "maskprune/dataset.h"
#include "maskprune/errors.h"
#include "maskprune/geometry.h"
#include "maskprune/report.h"
#include "maskprune/scoring.h"
#include "maskprune/selector.h"
#include "maskprune/stats.h"
#include "maskprune/synth.h"
#include "oracles.h"

namespace maskprune {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string &what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char *format, double a, double b = 0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, format, a, b);
  return buf;
}

fs::path scratch_dir(const std::string &name) {
  const fs::path dir = fs::temp_directory_path() / ("maskprune_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Outcome scale_invariance() {
  Outcome o;
  const auto start = Clock::now();
  std::mt19937_64 rng(1);
  double worst = 0;
  for (int i = 0; i < 50; ++i) {
    const auto ring = oracle::random_simple(rng, {3, -7}, 50);
    const double base = si_scs(polygon_set_metrics(PolygonSet{{ring}}));
    for (double k : {0.5, 2.0, 10.0}) {
      Ring scaled = ring;
      for (Point &p : scaled) p = {p.x * k, p.y * k};
      const double q = si_scs(polygon_set_metrics(PolygonSet{{scaled}}));
      worst = std::max(worst, std::abs(q - base) / base);
    }
  }
  o.require(worst < 1e-9, fmt("polygon relative drift %.3g", worst));
  const double q64 = si_scs(raster_metrics(oracle::digital_disc(64)));
  const double q128 = si_scs(raster_metrics(oracle::digital_disc(128)));
  const double disc = std::abs(q64 - q128) / q128;
  o.require(disc < 0.02, fmt("disc r64 vs r128 differ by %.4f", disc));
  const double t = seconds_since(start);
  o.require(t < 5, fmt("took %.2f s", t));
  if (o.pass) o.detail = fmt("max polygon drift %.2g, disc drift %.4f", worst, disc);
  return o;
}

Outcome isoperimetric_bounds() {
  Outcome o;
  const auto start = Clock::now();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> scale(0.5, 500);
  double polygon_min = 1e300, raster_min = 1e300;
  for (int i = 0; i < 1000; ++i) {
    const auto ring = oracle::random_simple(rng, {0, 0}, scale(rng));
    polygon_min = std::min(polygon_min, si_scs(polygon_set_metrics(PolygonSet{{ring}})));
  }
  std::uniform_int_distribution<int> side(1, 40);
  std::uniform_real_distribution<double> density(0.05, 0.95);
  for (int made = 0; made < 1000;) {
    const auto grid = oracle::random_grid(rng, side(rng), side(rng), density(rng));
    const ShapeMetrics m = raster_metrics(oracle::from_grid(grid));
    if (m.degenerate()) continue;
    raster_min = std::min(raster_min, si_scs(m));
    ++made;
  }
  o.require(polygon_min >= 1 - 1e-6, fmt("polygon min %.9f", polygon_min));
  o.require(raster_min >= 4 / std::numbers::pi - 1e-6, fmt("raster min %.9f", raster_min));
  const double t = seconds_since(start);
  o.require(t < 10, fmt("took %.2f s", t));
  if (o.pass) o.detail = fmt("polygon min %.6f, raster min %.6f", polygon_min, raster_min);
  return o;
}

Outcome shape_ordering() {
  Outcome o;
  const double area = 5000;
  const double circle_r = std::sqrt(2 * area / (360 * std::sin(2 * std::numbers::pi / 360)));
  const double ratio = 0.38;
  const double star_r = std::sqrt(area / (5 * ratio * std::sin(std::numbers::pi / 5)));
  Dataset ds;
  ds.categories = {{1, "shape"}};
  const SynthSpec specs[] = {{CircleShape{360, circle_r}, {320, 240}, 1},
                             {SquareShape{std::sqrt(area)}, {320, 240}, 1},
                             {StarShape{5, star_r, star_r * ratio}, {320, 240}, 1}};
  std::vector<double> oracle_q;
  for (int i = 0; i < 3; ++i) {
    ds.images.push_back({i + 1, "trio.jpg", 640, 480});
    ds.instances.push_back(gen_shape(specs[i], i + 1, ds.images.back()));
    const Ring &ring = std::get<PolygonSet>(ds.instances.back().mask).rings[0];
    double fan = 0;
    for (std::size_t k = 0; k < ring.size(); ++k) {
      const Point a{ring[k].x - 320, ring[k].y - 240};
      const Point b{ring[(k + 1) % ring.size()].x - 320, ring[(k + 1) % ring.size()].y - 240};
      fan += 0.5 * std::abs(a.x * b.y - b.x * a.y);
    }
    o.require(std::abs(fan - area) < 1e-6 * area, "trio areas differ");
    const double p = oracle::edge_sum(ring);
    oracle_q.push_back(p * p / (4 * std::numbers::pi * fan));
  }
  o.require(oracle_q[2] > oracle_q[1] && oracle_q[1] > oracle_q[0], "oracle ordering");
  const std::vector<ImageId> expected = {3, 2, 1};
  for (auto [stage, name] : {std::pair{ScoreStage::kScs, "scs"}, std::pair{ScoreStage::kSi, "si"},
                             std::pair{ScoreStage::kCb, "cb"}}) {
    const ScoreReport r = score_dataset(ds, {}, stage);
    const SelectionResult ranked = select_top_k(r.images, 0.0);
    o.require(ranked.kept_image_ids == expected, std::string("ranking under ") + name);
    o.require(r.images[2].value > r.images[1].value && r.images[1].value > r.images[0].value,
              std::string("strict ordering under ") + name);
  }
  if (o.pass) o.detail = "star > square > circle under scs, si, cb";
  return o;
}

Outcome class_balance() {
  Outcome o;
  CorpusConfig cfg;
  cfg.image_count = 1000;
  cfg.class_mix = {0.90, 0.09, 0.01};
  cfg.seed = 2024;
  cfg.circle_sides = 120;
  const Dataset ds = gen_corpus(cfg);
  const auto full = class_histogram(ds);
  std::size_t rare = 0;
  for (std::size_t i = 1; i < full.size(); ++i)
    if (full[i].count < full[rare].count) rare = i;
  o.require(full[rare].count > 0, "rarest class has no instances");

  const ScoreReport scores = score_dataset(ds);
  const auto cb = coverage_delta(ds, prune(ds, select_top_k(scores.images, 0.5)));
  for (const auto &c : cb) o.require(c.kept_count >= 1, "cb dropped a class entirely");

  std::vector<ImageId> ids;
  for (const auto &img : ds.images) ids.push_back(img.id);
  double random_mean = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed)
    random_mean += coverage_delta(ds, prune(ds, select_random(ids, 0.5, seed)))[rare].fraction / 20;
  o.require(cb[rare].fraction > random_mean,
            fmt("rare retention cb %.4f <= random mean %.4f", cb[rare].fraction, random_mean));
  if (o.pass)
    o.detail = fmt("rare class retention cb %.4f vs random mean %.4f", cb[rare].fraction, random_mean);
  return o;
}

Outcome ablation_distinguishability() {
  Outcome o;
  const Dataset ds = load_coco(oracle::data_path("fixture10.json"));
  std::vector<std::set<ImageId>> kept;
  for (ScoreStage stage : {ScoreStage::kScs, ScoreStage::kSi, ScoreStage::kCb}) {
    const auto sel = select_top_k(score_dataset(ds, {}, stage).images, 0.5);
    kept.emplace_back(sel.kept_image_ids.begin(), sel.kept_image_ids.end());
  }
  o.require(kept[0] != kept[1], "scs and si keep the same images");
  o.require(kept[0] != kept[2], "scs and cb keep the same images");
  o.require(kept[1] != kept[2], "si and cb keep the same images");
  if (o.pass) o.detail = "kept sets at p=0.5 differ pairwise on fixture10.json";
  return o;
}

std::string render_run(const Dataset &ds, unsigned workers, SelectionResult *selection) {
  const ScoreReport r = score_dataset(ds, {CrowdPolicy::kScore, workers});
  *selection = select_top_k(r.images, 0.3);
  std::ostringstream s;
  write_instance_csv(s, r.instances);
  write_image_csv(s, r.images);
  write_manifest(s, *selection);
  return s.str();
}

Outcome throughput() {
  Outcome o;
  CorpusConfig cfg;
  cfg.image_count = 10000;
  cfg.fixed_instances = 5;
  cfg.seed = 6;
  const fs::path dir = scratch_dir("throughput");
  const std::string path = (dir / "corpus.json").string();
  std::ofstream(path, std::ios::binary) << emit_coco(gen_corpus(cfg));

  const auto start = Clock::now();
  const Dataset ds = load_coco(path);
  const ScoreReport r = score_dataset(ds, {CrowdPolicy::kScore, 1});
  const SelectionResult sel = select_top_k(r.images, 0.3);
  const double t = seconds_since(start);
  o.require(ds.images.size() == 10000 && ds.instances.size() == 50000, "corpus size");
  o.require(sel.k == 7000, "kept count");
  o.require(t < 60, fmt("parse+score+rank took %.2f s", t));

  SelectionResult s1, s2, s8;
  const std::string one = render_run(ds, 1, &s1);
  o.require(one == render_run(ds, 2, &s2), "workers 1 vs 2 differ");
  o.require(one == render_run(ds, 8, &s8), "workers 1 vs 8 differ");
  fs::remove_all(dir);
  if (o.pass) o.detail = fmt("10000 images / 50000 instances in %.2f s single-worker", t);
  return o;
}

Outcome codec_exactness() {
  Outcome o;
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> side(1, 120);
  std::uniform_real_distribution<double> density(0, 1);
  for (int i = 0; i < 1000 && o.pass; ++i) {
    const int h = side(rng), w = side(rng);
    BitMask mask = oracle::from_grid(oracle::random_grid(rng, h, w, density(rng)));
    if (i % 3 == 0) {  // blobby masks give long runs
      mask = oracle::rasterize(oracle::random_simple(rng, {w / 2.0, h / 2.0}, std::min(h, w) / 2.0),
                               h, w);
    }
    const RunList runs = rle_encode(mask);
    const std::string counts = coco_counts_encode(runs);
    const RunList back = coco_counts_decode(counts);
    o.require(back == runs, "counts round trip changed runs");
    o.require(oracle::to_grid(rle_decode(back, h, w)) == oracle::to_grid(mask),
              "mask round trip changed pixels");
    o.require(coco_counts_encode(back) == counts, "re-encoding changed bytes");
  }

  const Json ref = Json::parse(oracle::read_file(oracle::data_path("reference_rle.json")));
  const std::string ref_counts = ref["counts"].get<std::string>();
  const Dataset ds = load_coco(oracle::data_path("fixture10.json"));
  bool found = false;
  for (const InstanceRecord &inst : ds.instances) {
    if (!inst.is_crowd) continue;
    const auto &rle = std::get<RasterRle>(inst.mask);
    const BitMask mask = rle_decode(rle.runs, rle.height, rle.width);
    o.require(coco_counts_encode(rle_encode(mask)) == ref_counts, "crowd encoding differs from reference");
    found = true;
  }
  o.require(found, "fixture has no crowd annotation");
  const Json emitted = Json::parse(emit_coco(ds));
  bool emitted_match = false;
  for (const auto &a : emitted["annotations"])
    if (a["iscrowd"] == 1) emitted_match = a["segmentation"]["counts"] == ref_counts;
  o.require(emitted_match, "emitted crowd counts differ from reference");
  if (o.pass) o.detail = "1000 random masks round-trip; crowd counts byte-identical to reference";
  return o;
}

Outcome end_to_end_determinism() {
  Outcome o;
  const fs::path dir = scratch_dir("determinism");
  const std::string fixture = oracle::data_path("fixture10.json");
  auto run = [&](const std::string &name, const std::string &workers) {
    std::ostringstream out, err;
    const int code = run_cli({"prune", "--annotations", fixture, "--out", (dir / (name + ".json")).string(),
                              "--pruning-rate", "0.5", "--workers", workers},
                             out, err);
    o.require(code == kExitOk, "prune exited " + std::to_string(code) + ": " + err.str());
    return oracle::read_file((dir / (name + ".json")).string()) + "\n--\n" +
           oracle::read_file((dir / (name + ".manifest.txt")).string());
  };
  const std::string a = run("a", "1");
  const std::string b = run("b", "1");
  const std::string c = run("c", "8");
  o.require(a == b, "repeated runs differ");
  o.require(a == c, "workers 1 vs 8 differ");
  o.require(a.size() > 10, "empty output");
  fs::remove_all(dir);
  if (o.pass) o.detail = "pruned file and manifest identical across runs and worker counts";
  return o;
}

Outcome k_exactness() {
  Outcome o;
  const int percents[] = {20, 30, 40, 50};
  const std::size_t sizes[] = {10, 117, 1000};
  std::size_t cases = 0;
  for (std::size_t d : sizes) {
    std::vector<ImageScore> scores;
    std::vector<ImageId> ids;
    for (std::size_t i = 0; i < d; ++i) {
      scores.push_back({static_cast<ImageId>(i + 1), static_cast<double>(i % 13), 1});
      ids.push_back(static_cast<ImageId>(i + 1));
    }
    for (int pct : percents) {
      // round_half_up((100 - pct) * d / 100) in integers
      const std::size_t want = (2 * d * static_cast<std::size_t>(100 - pct) + 100) / 200;
      const double p = pct / 100.0;
      o.require(select_top_k(scores, p).kept_image_ids.size() == want,
                "top-k size at D=" + std::to_string(d) + " p=" + std::to_string(pct) + "%");
      o.require(select_random(ids, p, 11).kept_image_ids.size() == want,
                "random size at D=" + std::to_string(d) + " p=" + std::to_string(pct) + "%");
      ++cases;
    }
  }
  if (o.pass) o.detail = std::to_string(cases) + " (D, p) cases exact for top-k and random";
  return o;
}

}  // namespace
}  // namespace maskprune

int main() {
  using maskprune::Outcome;
  const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria = {
      {"scale invariance", maskprune::scale_invariance},
      {"isoperimetric bounds", maskprune::isoperimetric_bounds},
      {"shape ordering", maskprune::shape_ordering},
      {"class balance", maskprune::class_balance},
      {"ablation distinguishability", maskprune::ablation_distinguishability},
      {"throughput", maskprune::throughput},
      {"codec exactness", maskprune::codec_exactness},
      {"end-to-end determinism", maskprune::end_to_end_determinism},
      {"K exactness", maskprune::k_exactness},
  };
  int failed = 0;
  int index = 0;
  for (const auto &[name, check] : criteria) {
    ++index;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception &e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s  %d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
