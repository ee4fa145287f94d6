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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "maskprune/dataset.h"
#include "oracles.h"

namespace maskprune {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto *info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("maskprune_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string &name) const { return (dir_ / name).string(); }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return run_cli(args, out_, err_);
  }

  void write(const std::string &name, const std::string &text) const {
    std::ofstream(path(name), std::ios::binary) << text;
  }

  std::vector<std::string> lines(const std::string &name) const {
    std::istringstream in(oracle::read_file(path(name)));
    std::vector<std::string> out;
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
  }

  std::set<std::string> manifest(const std::string &name) const {
    const auto l = lines(name);
    return {l.begin(), l.end()};
  }

  fs::path dir_;
  std::ostringstream out_, err_;
  const std::string fixture_ = oracle::data_path("fixture10.json");
};

TEST_F(CliTest, ScoreWritesReports) {
  ASSERT_EQ(run({"score", "--annotations", fixture_, "--report", path("r")}), kExitOk) << err_.str();
  const auto images = lines("r.images.csv");
  ASSERT_EQ(images.size(), 11u);
  EXPECT_EQ(images[0], "image_id,instance_count,image_score");
  EXPECT_EQ(lines("r.instances.csv").size(), 12u);
  const Json summary = Json::parse(out_.str());
  EXPECT_EQ(summary["command"], "score");
  EXPECT_EQ(summary["images"], 10);
  EXPECT_EQ(summary["instances"], 11);
  EXPECT_EQ(out_.str().find('\n'), out_.str().size() - 1);
}

TEST_F(CliTest, MethodsKeepDifferentImages) {
  const std::map<std::string, std::set<std::string>> expected = {
      {"scs", {"2", "3", "6", "8", "10"}},
      {"si", {"1", "2", "3", "8", "10"}},
      {"cb", {"1", "2", "5", "8", "10"}}};
  for (const auto &[method, kept] : expected) {
    ASSERT_EQ(run({"prune", "--annotations", fixture_, "--out", path(method + ".json"),
                   "--pruning-rate", "0.5", "--method", method}),
              kExitOk)
        << err_.str();
    EXPECT_EQ(manifest(method + ".manifest.txt"), kept) << method;
    const Dataset pruned = load_coco(path(method + ".json"));
    EXPECT_EQ(pruned.images.size(), 5u);
    EXPECT_TRUE(fs::exists(path(method + ".coverage.csv")));
  }
}

TEST_F(CliTest, PruneRateAndSummary) {
  ASSERT_EQ(run({"prune", "--annotations", fixture_, "--out", path("p.json"), "--pruning-rate",
                 "0.4"}),
            kExitOk);
  EXPECT_EQ(load_coco(path("p.json")).images.size(), 6u);
  EXPECT_EQ(lines("p.manifest.txt").size(), 6u);
  const Json summary = Json::parse(out_.str());
  EXPECT_EQ(summary["kept_images"], 6);
  EXPECT_EQ(summary["method"], "cb");
}

TEST_F(CliTest, RandomIsSeeded) {
  for (const char *name : {"a.json", "b.json"}) {
    ASSERT_EQ(run({"prune", "--annotations", fixture_, "--out", path(name), "--pruning-rate", "0.4",
                   "--method", "random", "--seed", "7"}),
              kExitOk);
  }
  EXPECT_EQ(oracle::read_file(path("a.json")), oracle::read_file(path("b.json")));
  EXPECT_EQ(oracle::read_file(path("a.manifest.txt")), oracle::read_file(path("b.manifest.txt")));
  EXPECT_EQ(lines("a.manifest.txt").size(), 6u);
}

TEST_F(CliTest, SeedMustMatchMethod) {
  EXPECT_EQ(run({"prune", "--annotations", fixture_, "--out", path("a.json"), "--pruning-rate",
                 "0.4", "--method", "random"}),
            kExitParse);
  EXPECT_EQ(run({"prune", "--annotations", fixture_, "--out", path("a.json"), "--pruning-rate",
                 "0.4", "--seed", "3"}),
            kExitParse);
  EXPECT_FALSE(fs::exists(path("a.json")));
  EXPECT_EQ(run({"prune", "--annotations", fixture_, "--out", path("a.json"), "--pruning-rate",
                 "1.0"}),
            kExitParse);
  EXPECT_EQ(run({"score", "--annotations", fixture_, "--report", path("r"), "--method", "bogus"}),
            kExitParse);
  EXPECT_EQ(run({"score", "--annotations", fixture_, "--report", fixture_.substr(0, fixture_.size() - 5),
                 "--workers", "0"}),
            kExitParse);
}

TEST_F(CliTest, MalformedInputExitsOneWithoutOutputs) {
  write("bad.json", R"({"images": [}, "annotations": []})");
  EXPECT_EQ(run({"prune", "--annotations", path("bad.json"), "--out", path("o.json"),
                 "--pruning-rate", "0.5"}),
            kExitParse);
  EXPECT_NE(err_.str().find("byte 13"), std::string::npos) << err_.str();
  EXPECT_FALSE(fs::exists(path("o.json")));
  EXPECT_FALSE(fs::exists(path("o.manifest.txt")));
  EXPECT_EQ(run({"score", "--annotations", path("missing.json"), "--report", path("r")}), kExitParse);
  EXPECT_FALSE(fs::exists(path("r.images.csv")));
}

TEST_F(CliTest, DanglingReferenceExitsTwo) {
  Json doc = Json::parse(oracle::read_file(fixture_));
  doc["annotations"][0]["image_id"] = 999;
  write("dangling.json", doc.dump());
  EXPECT_EQ(run({"score", "--annotations", path("dangling.json"), "--report", path("r")}),
            kExitIntegrity);
  EXPECT_NE(err_.str().find("999"), std::string::npos);
  EXPECT_FALSE(fs::exists(path("r.instances.csv")));
}

std::map<std::string, std::string> rows_by_id(const std::vector<std::string> &lines) {
  std::map<std::string, std::string> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) rows[lines[i].substr(0, lines[i].find(','))] = lines[i];
  return rows;
}

/// Columns 0..6 (through si_scs) of an instance CSV row.
std::string through_si(const std::string &row) { return row.substr(0, row.rfind(',')); }

TEST_F(CliTest, RescoringPrunedFileRecomputesOnlyCb) {
  ASSERT_EQ(run({"score", "--annotations", fixture_, "--report", path("full")}), kExitOk);
  ASSERT_EQ(run({"prune", "--annotations", fixture_, "--out", path("p.json"), "--pruning-rate",
                 "0.5"}),
            kExitOk);
  ASSERT_EQ(run({"score", "--annotations", path("p.json"), "--report", path("pruned")}), kExitOk);
  const auto full = rows_by_id(lines("full.instances.csv"));
  const auto pruned = rows_by_id(lines("pruned.instances.csv"));
  ASSERT_FALSE(pruned.empty());
  bool cb_changed = false;
  for (const auto &[id, row] : pruned) {
    ASSERT_TRUE(full.count(id));
    EXPECT_EQ(through_si(row), through_si(full.at(id)));
    cb_changed |= row != full.at(id);
  }
  EXPECT_TRUE(cb_changed);
}

TEST_F(CliTest, WorkerCountDoesNotChangeBytes) {
  ASSERT_EQ(run({"synth", "--out", path("c.json"), "--count", "50", "--seed", "3",
                 "--circle-sides", "40"}),
            kExitOk);
  for (const char *w : {"1", "4"}) {
    ASSERT_EQ(run({"score", "--annotations", path("c.json"), "--report", path(std::string("w") + w),
                   "--workers", w}),
              kExitOk);
  }
  EXPECT_EQ(oracle::read_file(path("w1.instances.csv")), oracle::read_file(path("w4.instances.csv")));
  EXPECT_EQ(oracle::read_file(path("w1.images.csv")), oracle::read_file(path("w4.images.csv")));
}

TEST_F(CliTest, StatsAndSynth) {
  ASSERT_EQ(run({"synth", "--out", path("c.json"), "--count", "30", "--seed", "9",
                 "--instances-per-image", "2"}),
            kExitOk);
  EXPECT_EQ(load_coco(path("c.json")).instances.size(), 60u);
  ASSERT_EQ(run({"prune", "--annotations", path("c.json"), "--out", path("p.json"),
                 "--pruning-rate", "0.5"}),
            kExitOk);
  ASSERT_EQ(run({"stats", "--annotations", path("c.json"), "--report", path("s"), "--pruned",
                 path("p.json"), "--edges", "100,1000,10000"}),
            kExitOk)
      << err_.str();
  const auto histogram = lines("s.area_histogram.csv");
  EXPECT_EQ(histogram[0], "lower,upper,count");
  EXPECT_EQ(histogram.size(), 6u);
  EXPECT_TRUE(fs::exists(path("s.class_counts.csv")));
  EXPECT_TRUE(fs::exists(path("s.area_quartiles.csv")));
  EXPECT_EQ(lines("s.coverage.csv")[0], "category_id,name,full_count,kept_count,fraction");
  const Json stats = Json::parse(oracle::read_file(path("s.stats.json")));
  EXPECT_EQ(stats["instances"], 60);
  EXPECT_TRUE(stats.contains("coverage"));
  EXPECT_EQ(run({"stats", "--annotations", path("c.json"), "--report", path("s"), "--edges", "5,2"}),
            kExitParse);
}

TEST_F(CliTest, Help) {
  EXPECT_EQ(run({"--help"}), kExitOk);
  EXPECT_EQ(run({}), kExitParse);
}

}  // namespace
}  // namespace maskprune
