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

#include "maskprune/cli.h"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "maskprune/dataset.h"
#include "maskprune/errors.h"
#include "maskprune/report.h"
#include "maskprune/scoring.h"
#include "maskprune/selector.h"
#include "maskprune/stats.h"
#include "maskprune/synth.h"

namespace maskprune {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

/// Output files are staged in memory and committed together, so a failing
/// command leaves nothing behind.
class OutputSet {
 public:
  void add(std::string path, std::string contents) {
    files_.emplace_back(std::move(path), std::move(contents));
  }

  void check_distinct(const std::string &input) const {
    std::vector<fs::path> seen;
    if (!input.empty()) seen.push_back(fs::weakly_canonical(input));
    for (const auto &[path, contents] : files_) {
      const fs::path p = fs::weakly_canonical(path);
      for (const fs::path &other : seen) {
        if (p == other) throw ArgumentError("output path collides with another path: " + path);
      }
      seen.push_back(p);
    }
  }

  void commit() const {
    for (const auto &[path, contents] : files_) {
      const std::string tmp = path + ".tmp";
      std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
      if (!f) throw std::runtime_error("cannot write " + tmp);
      f << contents;
      f.close();
      if (!f) throw std::runtime_error("cannot write " + tmp);
    }
    for (const auto &[path, contents] : files_) fs::rename(path + ".tmp", path);
  }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

/// "dir/pruned.json" -> "dir/pruned"
std::string stem_path(const std::string &path) {
  fs::path p(path);
  return (p.parent_path() / p.stem()).string();
}

ScoreStage stage_of(Method m) {
  switch (m) {
    case Method::kScs:
      return ScoreStage::kScs;
    case Method::kSi:
      return ScoreStage::kSi;
    default:
      return ScoreStage::kCb;
  }
}

std::string method_name(Method m) {
  switch (m) {
    case Method::kCb:
      return "cb";
    case Method::kSi:
      return "si";
    case Method::kScs:
      return "scs";
    case Method::kRandom:
      return "random";
  }
  return "cb";
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_method_seed(const RunConfig &cfg) {
  if (cfg.method == Method::kRandom && !cfg.seed) {
    throw ArgumentError("--method random requires --seed");
  }
  if (cfg.method != Method::kRandom && cfg.seed) {
    throw ArgumentError("--seed only applies to --method random");
  }
}

template <typename Fn>
std::string render(Fn &&fn) {
  std::ostringstream s;
  fn(s);
  return s.str();
}

void log_warnings(const std::vector<std::string> &warnings, std::ostream &err) {
  for (const std::string &w : warnings) err << "warning: " << w << '\n';
}

int cmd_score(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
  if (cfg.method == Method::kRandom) throw ArgumentError("score does not support --method random");
  check_method_seed(cfg);
  const auto start = Clock::now();
  const Dataset ds = load_coco(cfg.annotations);
  const ScoreReport report =
      score_dataset(ds, {cfg.skip_crowd ? CrowdPolicy::kSkip : CrowdPolicy::kScore, cfg.workers},
                    stage_of(cfg.method));

  OutputSet files;
  files.add(cfg.report + ".instances.csv",
            render([&](std::ostream &s) { write_instance_csv(s, report.instances); }));
  files.add(cfg.report + ".images.csv",
            render([&](std::ostream &s) { write_image_csv(s, report.images); }));
  files.check_distinct(cfg.annotations);
  files.commit();
  log_warnings(report.warnings, err);

  Json summary = {{"command", "score"},
                  {"method", method_name(cfg.method)},
                  {"images", ds.images.size()},
                  {"instances", ds.instances.size()},
                  {"degenerate", report.warnings.size()},
                  {"elapsed_seconds", seconds_since(start)}};
  out << summary.dump() << '\n';
  return kExitOk;
}

int cmd_prune(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
  check_method_seed(cfg);
  kept_count(0, cfg.pruning_rate);  // validates the rate before any work
  const auto start = Clock::now();
  const Dataset ds = load_coco(cfg.annotations);

  SelectionResult selection;
  std::size_t degenerate = 0;
  if (cfg.method == Method::kRandom) {
    std::vector<ImageId> ids;
    ids.reserve(ds.images.size());
    for (const ImageRecord &img : ds.images) ids.push_back(img.id);
    selection = select_random(ids, cfg.pruning_rate, *cfg.seed);
  } else {
    const ScoreReport report =
        score_dataset(ds, {cfg.skip_crowd ? CrowdPolicy::kSkip : CrowdPolicy::kScore, cfg.workers},
                      stage_of(cfg.method));
    log_warnings(report.warnings, err);
    degenerate = report.warnings.size();
    selection = select_top_k(report.images, cfg.pruning_rate);
  }
  const Dataset pruned = prune(ds, selection);
  const std::vector<ClassRetention> coverage = coverage_delta(ds, pruned);

  const std::string report_prefix = cfg.report.empty() ? stem_path(cfg.out) : cfg.report;
  OutputSet files;
  files.add(cfg.out, emit_coco(ds, selection.kept_image_ids));
  files.add(stem_path(cfg.out) + ".manifest.txt",
            render([&](std::ostream &s) { write_manifest(s, selection); }));
  files.add(report_prefix + ".coverage.csv",
            render([&](std::ostream &s) { write_coverage_csv(s, coverage); }));
  files.check_distinct(cfg.annotations);
  files.commit();

  Json summary = {{"command", "prune"},
                  {"method", method_name(cfg.method)},
                  {"pruning_rate", cfg.pruning_rate},
                  {"images", ds.images.size()},
                  {"kept_images", selection.k},
                  {"instances", ds.instances.size()},
                  {"kept_instances", pruned.instances.size()},
                  {"degenerate", degenerate},
                  {"elapsed_seconds", seconds_since(start)}};
  out << summary.dump() << '\n';
  return kExitOk;
}

int cmd_stats(const RunConfig &cfg, const std::string &pruned_path,
              const std::vector<double> &edges, std::ostream &out) {
  const auto start = Clock::now();
  const Dataset ds = load_coco(cfg.annotations);
  const DistributionReport report = distribution_report(ds, edges);

  OutputSet files;
  files.add(cfg.report + ".class_counts.csv",
            render([&](std::ostream &s) { write_class_counts_csv(s, report.classes); }));
  files.add(cfg.report + ".area_histogram.csv",
            render([&](std::ostream &s) { write_area_histogram_csv(s, report.areas); }));
  files.add(cfg.report + ".area_quartiles.csv",
            render([&](std::ostream &s) { write_quartiles_csv(s, report.quartiles); }));
  Json json = to_json(report);
  if (!pruned_path.empty()) {
    const Dataset pruned = load_coco(pruned_path);
    const std::vector<ClassRetention> coverage = coverage_delta(ds, pruned);
    files.add(cfg.report + ".coverage.csv",
              render([&](std::ostream &s) { write_coverage_csv(s, coverage); }));
    Json cov = Json::array();
    for (const ClassRetention &r : coverage) {
      cov.push_back({{"category_id", r.category_id},
                     {"full_count", r.full_count},
                     {"kept_count", r.kept_count},
                     {"fraction", std::isnan(r.fraction) ? Json(nullptr) : Json(r.fraction)}});
    }
    json["coverage"] = std::move(cov);
  }
  files.add(cfg.report + ".stats.json", json.dump(1) + "\n");
  files.check_distinct(cfg.annotations);
  files.commit();

  Json summary = {{"command", "stats"},
                  {"images", report.image_count},
                  {"instances", report.instance_count},
                  {"degenerate", report.areas.degenerate},
                  {"elapsed_seconds", seconds_since(start)}};
  out << summary.dump() << '\n';
  return kExitOk;
}

int cmd_synth(const RunConfig &cfg, const CorpusConfig &corpus, std::ostream &out) {
  const auto start = Clock::now();
  const Dataset ds = gen_corpus(corpus);
  OutputSet files;
  files.add(cfg.out, emit_coco(ds));
  files.check_distinct("");
  files.commit();
  Json summary = {{"command", "synth"},
                  {"images", ds.images.size()},
                  {"instances", ds.instances.size()},
                  {"seed", corpus.seed},
                  {"elapsed_seconds", seconds_since(start)}};
  out << summary.dump() << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Training-free dataset pruning for instance segmentation annotations"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string crowd = "score";
  std::string method = "cb";
  std::uint64_t seed = 0;
  const std::map<std::string, Method> methods = {
      {"cb", Method::kCb}, {"si", Method::kSi}, {"scs", Method::kScs}, {"random", Method::kRandom}};

  auto add_workers = [&](CLI::App *cmd) {
    cmd->add_option("--workers", cfg.workers, "Scoring threads; output does not depend on it")
        ->envname("MASKPRUNE_WORKERS")
        ->check(CLI::Range(1u, 1024u));
  };
  auto add_scoring = [&](CLI::App *cmd) {
    cmd->add_option("--method", method, "Image score: cb, si, scs (or random for prune)")
        ->check(CLI::IsMember({"cb", "si", "scs", "random"}));
    cmd->add_option("--seed", seed, "Seed for --method random");
    cmd->add_option("--crowd", crowd, "Crowd annotations: score or skip")
        ->check(CLI::IsMember({"score", "skip"}));
    add_workers(cmd);
  };

  CLI::App *score = app.add_subcommand("score", "Write per-instance and per-image score reports");
  score->add_option("--annotations", cfg.annotations, "COCO annotation file")->required();
  score->add_option("--report", cfg.report, "Report path prefix")->required();
  add_scoring(score);

  CLI::App *prune_cmd = app.add_subcommand("prune", "Keep the top-scoring images");
  prune_cmd->add_option("--annotations", cfg.annotations, "COCO annotation file")->required();
  prune_cmd->add_option("--out", cfg.out, "Pruned annotation file")->required();
  prune_cmd->add_option("--report", cfg.report, "Coverage report prefix (default: --out stem)");
  prune_cmd->add_option("--pruning-rate", cfg.pruning_rate, "Fraction of images to remove")
      ->required();
  add_scoring(prune_cmd);

  std::string pruned_path;
  std::vector<double> edges = default_area_edges();
  CLI::App *stats = app.add_subcommand("stats", "Class and area distribution reports");
  stats->add_option("--annotations", cfg.annotations, "COCO annotation file")->required();
  stats->add_option("--report", cfg.report, "Report path prefix")->required();
  stats->add_option("--pruned", pruned_path, "Pruned file for per-class retention");
  stats->add_option("--edges", edges, "Ascending area bucket edges in px^2")->delimiter(',');
  add_workers(stats);

  CorpusConfig corpus;
  std::size_t fixed_instances = 0;
  CLI::App *synth = app.add_subcommand("synth", "Generate a synthetic COCO corpus");
  synth->add_option("--out", cfg.out, "Output annotation file")->required();
  synth->add_option("--count", corpus.image_count, "Number of images")->check(CLI::PositiveNumber);
  synth->add_option("--seed", corpus.seed, "Generator seed");
  synth->add_option("--class-mix", corpus.class_mix, "Relative class frequencies")->delimiter(',');
  synth->add_option("--min-area", corpus.min_area, "Smallest instance area, px^2");
  synth->add_option("--max-area", corpus.max_area, "Largest instance area, px^2");
  synth->add_option("--mean-instances", corpus.mean_instances, "Mean instances per image");
  synth->add_option("--instances-per-image", fixed_instances, "Fixed instances per image");
  synth->add_option("--circle-sides", corpus.circle_sides, "Vertices per circle");
  synth->add_option("--width", corpus.image_width, "Image width");
  synth->add_option("--height", corpus.image_height, "Image height");

  std::vector<std::string> argv_storage = {"maskprune"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char *> argv;
  for (const std::string &a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError &e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitParse;
  }

  cfg.method = methods.at(method);
  cfg.skip_crowd = crowd == "skip";
  for (CLI::App *cmd : {score, prune_cmd}) {
    if (cmd->parsed() && cmd->count("--seed") > 0) cfg.seed = seed;
  }
  if (synth->count("--instances-per-image") > 0) corpus.fixed_instances = fixed_instances;

  try {
    if (score->parsed()) return cmd_score(cfg, out, err);
    if (prune_cmd->parsed()) return cmd_prune(cfg, out, err);
    if (stats->parsed()) return cmd_stats(cfg, pruned_path, edges, out);
    return cmd_synth(cfg, corpus, out);
  } catch (const ParseError &e) {
    err << "error: " << e.what();
    if (e.byte_offset()) err << " (byte " << *e.byte_offset() << ")";
    err << '\n';
    return kExitParse;
  } catch (const CodecError &e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const IntegrityError &e) {
    err << "error: " << e.what() << '\n';
    return kExitIntegrity;
  } catch (const GeometryError &e) {
    err << "error: " << e.what() << '\n';
    return kExitIntegrity;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  }
}

}  // namespace maskprune
