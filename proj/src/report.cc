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

#include "maskprune/report.h"

#include <array>
#include <charconv>
#include <cmath>

namespace maskprune {

namespace {

std::string csv_field(const std::string &s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 6);
  return std::string(buf.data(), res.ptr);
}

void write_instance_csv(std::ostream &out, std::span<const InstanceScore> scores) {
  out << "instance_id,image_id,category_id,perimeter,area,scs,si_scs,cb_scs\n";
  for (const InstanceScore &s : scores) {
    out << s.instance_id << ',' << s.image_id << ',' << s.category_id << ','
        << format_number(s.metrics.perimeter) << ',' << format_number(s.metrics.area) << ','
        << format_number(s.raw_scs) << ',' << format_number(s.si_scs) << ','
        << format_number(s.cb_scs) << '\n';
  }
}

void write_image_csv(std::ostream &out, std::span<const ImageScore> scores) {
  out << "image_id,instance_count,image_score\n";
  for (const ImageScore &s : scores) {
    out << s.image_id << ',' << s.instance_count << ',' << format_number(s.value) << '\n';
  }
}

void write_manifest(std::ostream &out, const SelectionResult &selection) {
  for (ImageId id : selection.kept_image_ids) out << id << '\n';
}

void write_coverage_csv(std::ostream &out, std::span<const ClassRetention> rows) {
  out << "category_id,name,full_count,kept_count,fraction\n";
  for (const ClassRetention &r : rows) {
    out << r.category_id << ',' << csv_field(r.name) << ',' << r.full_count << ','
        << r.kept_count << ',' << format_number(r.fraction) << '\n';
  }
}

void write_class_counts_csv(std::ostream &out, std::span<const ClassCount> rows) {
  out << "category_id,name,count\n";
  for (const ClassCount &r : rows) {
    out << r.category_id << ',' << csv_field(r.name) << ',' << r.count << '\n';
  }
}

void write_area_histogram_csv(std::ostream &out, const AreaHistogram &histogram) {
  out << "lower,upper,count\n";
  for (std::size_t b = 0; b < histogram.counts.size(); ++b) {
    const double lo = b == 0 ? 0.0 : histogram.edges[b - 1];
    const double hi = b < histogram.edges.size() ? histogram.edges[b] : INFINITY;
    out << format_number(lo) << ',' << format_number(hi) << ',' << histogram.counts[b] << '\n';
  }
  out << "degenerate,," << histogram.degenerate << '\n';
}

void write_quartiles_csv(std::ostream &out, std::span<const ClassAreaQuartiles> rows) {
  out << "category_id,count,min,q1,median,q3,max\n";
  for (const ClassAreaQuartiles &q : rows) {
    out << q.category_id << ',' << q.count << ',' << format_number(q.min) << ','
        << format_number(q.q1) << ',' << format_number(q.median) << ',' << format_number(q.q3)
        << ',' << format_number(q.max) << '\n';
  }
}

Json to_json(const DistributionReport &report) {
  Json j = Json::object();
  j["images"] = report.image_count;
  j["instances"] = report.instance_count;
  Json classes = Json::array();
  for (const ClassCount &c : report.classes) {
    classes.push_back({{"category_id", c.category_id}, {"name", c.name}, {"count", c.count}});
  }
  j["class_counts"] = std::move(classes);
  j["area_histogram"] = {{"edges", report.areas.edges},
                         {"counts", report.areas.counts},
                         {"degenerate", report.areas.degenerate}};
  Json quartiles = Json::array();
  for (const ClassAreaQuartiles &q : report.quartiles) {
    quartiles.push_back({{"category_id", q.category_id},
                         {"count", q.count},
                         {"min", q.min},
                         {"q1", q.q1},
                         {"median", q.median},
                         {"q3", q.q3},
                         {"max", q.max}});
  }
  j["area_quartiles"] = std::move(quartiles);
  j["instances_per_image"] = report.instances_per_image;
  return j;
}

}  // namespace maskprune
