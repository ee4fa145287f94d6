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

#ifndef MASKPRUNE_DATASET_H_
#define MASKPRUNE_DATASET_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "maskprune/geometry.h"

namespace maskprune {

using ImageId = std::int64_t;
using InstanceId = std::int64_t;
using CategoryId = std::int64_t;

/// Order-preserving JSON used for every field we carry but do not model.
using Json = nlohmann::ordered_json;

// Every record keeps the source object's remaining fields in `extra`. Modeled
// keys stay in `extra` as null placeholders so emission restores key order.
// Equality ignores those placeholders: two records are equal when their
// modeled fields and their other extra fields (in order) match.

struct CategoryInfo {
  CategoryId id = 0;
  std::string name;
  Json extra = Json::object();
  bool operator==(const CategoryInfo &other) const;
};

struct ImageRecord {
  ImageId id = 0;
  std::string file_name;
  int width = 0;
  int height = 0;
  Json extra = Json::object();
  bool operator==(const ImageRecord &other) const;
};

struct InstanceRecord {
  InstanceId id = 0;
  ImageId image_id = 0;
  CategoryId category_id = 0;
  MaskGeometry mask;
  bool is_crowd = false;
  Json extra = Json::object();  // area, bbox, ... preserved verbatim
  bool operator==(const InstanceRecord &other) const;
};

struct Dataset {
  std::vector<ImageRecord> images;
  std::vector<InstanceRecord> instances;
  std::vector<CategoryInfo> categories;
  /// Top-level object in source order; `images`, `annotations` and
  /// `categories` appear as null placeholders.
  Json passthrough = Json::object();
  bool operator==(const Dataset &other) const;
};

/// Parses a COCO-style annotation document. Throws ParseError (with the byte
/// offset for malformed JSON), IntegrityError for dangling or duplicate ids,
/// GeometryError when RLE runs do not cover the declared grid, and
/// CodecError for bad compressed counts.
Dataset parse_coco(std::string_view document);
Dataset load_coco(const std::string &path);

/// Serializes the images in `kept_image_ids`, their annotations, every
/// category and all passthrough fields. Records keep dataset order.
/// Throws ArgumentError for ids that are not in the dataset.
std::string emit_coco(const Dataset &dataset, std::span<const ImageId> kept_image_ids);
std::string emit_coco(const Dataset &dataset);

struct Diagnostic {
  enum class Kind {
    kBadId,
    kDuplicateId,
    kDanglingReference,
    kBadImage,
    kBadCategory,
    kBadRing,
    kBadRle,
  };
  Kind kind;
  /// Id of the offending record (instance id for ring/RLE problems).
  std::int64_t record_id = 0;
  std::string message;
};

/// All invariant violations; empty iff the dataset is valid.
std::vector<Diagnostic> validate(const Dataset &dataset);

/// Lookup tables over a dataset. Holds references; the dataset must outlive it.
class DatasetIndex {
 public:
  explicit DatasetIndex(const Dataset &dataset);

  bool has_image(ImageId id) const { return image_pos_.contains(id); }
  bool has_category(CategoryId id) const { return category_pos_.contains(id); }
  std::size_t image_position(ImageId id) const { return image_pos_.at(id); }
  std::size_t category_position(CategoryId id) const { return category_pos_.at(id); }

  /// Positions into dataset.instances for one image, in dataset order.
  std::span<const std::size_t> instances_of(ImageId id) const;

 private:
  std::unordered_map<ImageId, std::size_t> image_pos_;
  std::unordered_map<CategoryId, std::size_t> category_pos_;
  std::vector<std::vector<std::size_t>> by_image_;
};

}  // namespace maskprune

#endif  // MASKPRUNE_DATASET_H_
