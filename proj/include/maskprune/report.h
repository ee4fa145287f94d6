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

#ifndef MASKPRUNE_REPORT_H_
#define MASKPRUNE_REPORT_H_

#include <ostream>
#include <span>
#include <string>

#include "maskprune/dataset.h"
#include "maskprune/scoring.h"
#include "maskprune/selector.h"
#include "maskprune/stats.h"

namespace maskprune {

/// Six significant digits, locale-independent ("%.6g" spelling).
std::string format_number(double value);

// instance_id,image_id,category_id,perimeter,area,scs,si_scs,cb_scs
void write_instance_csv(std::ostream &out, std::span<const InstanceScore> scores);
// image_id,instance_count,image_score
void write_image_csv(std::ostream &out, std::span<const ImageScore> scores);
/// One kept image id per line, rank order.
void write_manifest(std::ostream &out, const SelectionResult &selection);

void write_coverage_csv(std::ostream &out, std::span<const ClassRetention> rows);
void write_class_counts_csv(std::ostream &out, std::span<const ClassCount> rows);
void write_area_histogram_csv(std::ostream &out, const AreaHistogram &histogram);
void write_quartiles_csv(std::ostream &out, std::span<const ClassAreaQuartiles> rows);

Json to_json(const DistributionReport &report);

}  // namespace maskprune

#endif  // MASKPRUNE_REPORT_H_
