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

#include "maskprune/dataset.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <unordered_set>
#include <utility>

#include "maskprune/errors.h"

namespace maskprune {

namespace {

constexpr const char *kImages = "images";
constexpr const char *kAnnotations = "annotations";
constexpr const char *kCategories = "categories";

std::string where(const char *section, std::size_t index) {
  return std::string(section) + "[" + std::to_string(index) + "]";
}

const Json &require(const Json &obj, const char *key, const std::string &ctx) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(ctx + ": missing field '" + key + "'");
  }
  return *it;
}

std::int64_t as_integer(const Json &value, const std::string &ctx) {
  if (value.is_number_integer()) return value.get<std::int64_t>();
  if (value.is_number_float()) {
    const double d = value.get<double>();
    if (std::isfinite(d) && std::floor(d) == d) return static_cast<std::int64_t>(d);
  }
  throw ParseError(ctx + ": expected an integer");
}

std::int64_t int_field(const Json &obj, const char *key, const std::string &ctx) {
  return as_integer(require(obj, key, ctx), ctx + "." + key);
}

std::string string_field(const Json &obj, const char *key, const std::string &ctx) {
  const Json &v = require(obj, key, ctx);
  if (!v.is_string()) throw ParseError(ctx + "." + key + ": expected a string");
  return v.get<std::string>();
}

/// Copies the object, replacing modeled keys with null placeholders.
Json extras_of(Json &&obj, std::initializer_list<const char *> modeled) {
  for (const char *key : modeled) {
    auto it = obj.find(key);
    if (it != obj.end()) *it = nullptr;
  }
  return std::move(obj);
}

PolygonSet parse_polygons(const Json &seg, const std::string &ctx) {
  PolygonSet set;
  set.rings.reserve(seg.size());
  for (const Json &flat : seg) {
    if (!flat.is_array()) throw ParseError(ctx + ": polygon must be a flat coordinate list");
    if (flat.size() % 2 != 0) {
      throw ParseError(ctx + ": polygon has an odd number of coordinates");
    }
    Ring ring;
    ring.reserve(flat.size() / 2);
    for (std::size_t i = 0; i < flat.size(); i += 2) {
      if (!flat[i].is_number() || !flat[i + 1].is_number()) {
        throw ParseError(ctx + ": polygon coordinates must be numbers");
      }
      ring.push_back({flat[i].get<double>(), flat[i + 1].get<double>()});
    }
    set.rings.push_back(std::move(ring));
  }
  return set;
}

RasterRle parse_rle(const Json &seg, const std::string &ctx) {
  const Json &size = require(seg, "size", ctx);
  if (!size.is_array() || size.size() != 2) throw ParseError(ctx + ".size: expected [h, w]");
  RasterRle rle;
  rle.height = static_cast<int>(as_integer(size[0], ctx + ".size"));
  rle.width = static_cast<int>(as_integer(size[1], ctx + ".size"));
  if (rle.height < 0 || rle.width < 0) throw ParseError(ctx + ".size: negative dimension");
  const Json &counts = require(seg, "counts", ctx);
  if (counts.is_string()) {
    rle.runs = coco_counts_decode(counts.get_ref<const std::string &>());
    rle.format = CountsFormat::kCompressed;
  } else if (counts.is_array()) {
    rle.runs.reserve(counts.size());
    for (const Json &c : counts) {
      const std::int64_t run = as_integer(c, ctx + ".counts");
      if (run < 0 || run > std::numeric_limits<std::uint32_t>::max()) {
        throw GeometryError(ctx + ".counts: run out of range");
      }
      rle.runs.push_back(static_cast<std::uint32_t>(run));
    }
    rle.format = CountsFormat::kList;
  } else {
    throw ParseError(ctx + ".counts: expected a string or a list");
  }
  return rle;
}

std::uint64_t run_sum(const RunList &runs) {
  std::uint64_t total = 0;
  for (std::uint32_t r : runs) total += r;
  return total;
}

Json to_json(const MaskGeometry &mask) {
  if (const auto *poly = std::get_if<PolygonSet>(&mask)) {
    Json out = Json::array();
    for (const Ring &ring : poly->rings) {
      Json flat = Json::array();
      flat.get_ref<Json::array_t &>().reserve(ring.size() * 2);
      for (const Point &p : ring) {
        flat.push_back(p.x);
        flat.push_back(p.y);
      }
      out.push_back(std::move(flat));
    }
    return out;
  }
  const auto &rle = std::get<RasterRle>(mask);
  Json out = Json::object();
  out["size"] = Json::array({rle.height, rle.width});
  if (rle.format == CountsFormat::kCompressed) {
    out["counts"] = coco_counts_encode(rle.runs);
  } else {
    out["counts"] = rle.runs;
  }
  return out;
}

/// Fills `key` in place if the placeholder exists, else appends it.
template <typename T>
void put(Json &obj, const char *key, T &&value) {
  obj[key] = std::forward<T>(value);
}

/// Extra fields minus the null placeholders of modeled keys.
Json unmodeled(const Json &extra, std::initializer_list<const char *> modeled) {
  if (!extra.is_object()) return extra;
  Json out = Json::object();
  for (auto it = extra.begin(); it != extra.end(); ++it) {
    bool placeholder = false;
    for (const char *key : modeled) placeholder |= it.value().is_null() && it.key() == key;
    if (!placeholder) out[it.key()] = it.value();
  }
  return out;
}

}  // namespace

bool CategoryInfo::operator==(const CategoryInfo &other) const {
  return id == other.id && name == other.name &&
         unmodeled(extra, {"id", "name"}) == unmodeled(other.extra, {"id", "name"});
}

bool ImageRecord::operator==(const ImageRecord &other) const {
  return id == other.id && file_name == other.file_name && width == other.width &&
         height == other.height &&
         unmodeled(extra, {"id", "file_name", "width", "height"}) ==
             unmodeled(other.extra, {"id", "file_name", "width", "height"});
}

bool InstanceRecord::operator==(const InstanceRecord &other) const {
  return id == other.id && image_id == other.image_id && category_id == other.category_id &&
         mask == other.mask && is_crowd == other.is_crowd &&
         unmodeled(extra, {"id", "image_id", "category_id", "segmentation", "iscrowd"}) ==
             unmodeled(other.extra, {"id", "image_id", "category_id", "segmentation", "iscrowd"});
}

bool Dataset::operator==(const Dataset &other) const {
  return images == other.images && instances == other.instances &&
         categories == other.categories &&
         unmodeled(passthrough, {kImages, kAnnotations, kCategories}) ==
             unmodeled(other.passthrough, {kImages, kAnnotations, kCategories});
}

Dataset parse_coco(std::string_view document) {
  Json root;
  try {
    root = Json::parse(document.begin(), document.end());
  } catch (const Json::parse_error &e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), e.byte);
  }
  if (!root.is_object()) throw ParseError("annotation document must be a JSON object");
  for (const char *key : {kImages, kAnnotations, kCategories}) {
    auto it = root.find(key);
    if (it == root.end() || !it->is_array()) {
      throw ParseError(std::string("missing or non-array '") + key + "'");
    }
  }

  Dataset ds;
  Json images = std::move(root[kImages]);
  Json annotations = std::move(root[kAnnotations]);
  Json categories = std::move(root[kCategories]);
  for (auto &[key, value] : root.items()) {
    ds.passthrough[key] = (key == kImages || key == kAnnotations || key == kCategories)
                              ? Json(nullptr)
                              : std::move(value);
  }

  ds.images.reserve(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    const std::string ctx = where(kImages, i);
    Json &obj = images[i];
    if (!obj.is_object()) throw ParseError(ctx + ": expected an object");
    ImageRecord img;
    img.id = int_field(obj, "id", ctx);
    img.file_name = string_field(obj, "file_name", ctx);
    img.width = static_cast<int>(int_field(obj, "width", ctx));
    img.height = static_cast<int>(int_field(obj, "height", ctx));
    img.extra = extras_of(std::move(obj), {"id", "file_name", "width", "height"});
    ds.images.push_back(std::move(img));
  }

  ds.categories.reserve(categories.size());
  for (std::size_t i = 0; i < categories.size(); ++i) {
    const std::string ctx = where(kCategories, i);
    Json &obj = categories[i];
    if (!obj.is_object()) throw ParseError(ctx + ": expected an object");
    CategoryInfo cat;
    cat.id = int_field(obj, "id", ctx);
    cat.name = string_field(obj, "name", ctx);
    cat.extra = extras_of(std::move(obj), {"id", "name"});
    ds.categories.push_back(std::move(cat));
  }

  ds.instances.reserve(annotations.size());
  for (std::size_t i = 0; i < annotations.size(); ++i) {
    std::string ctx = where(kAnnotations, i);
    Json &obj = annotations[i];
    if (!obj.is_object()) throw ParseError(ctx + ": expected an object");
    InstanceRecord inst;
    inst.id = int_field(obj, "id", ctx);
    ctx += " (id " + std::to_string(inst.id) + ")";
    inst.image_id = int_field(obj, "image_id", ctx);
    inst.category_id = int_field(obj, "category_id", ctx);
    if (auto it = obj.find("iscrowd"); it != obj.end() && !it->is_null()) {
      inst.is_crowd = it->is_boolean() ? it->get<bool>() : as_integer(*it, ctx + ".iscrowd") != 0;
    }
    const Json &seg = require(obj, "segmentation", ctx);
    if (seg.is_array()) {
      inst.mask = parse_polygons(seg, ctx + ".segmentation");
    } else if (seg.is_object()) {
      RasterRle rle;
      try {
        rle = parse_rle(seg, ctx + ".segmentation");
      } catch (const CodecError &e) {
        throw CodecError(ctx + ".segmentation: " + e.what());
      }
      const std::uint64_t expected =
          static_cast<std::uint64_t>(rle.height) * static_cast<std::uint64_t>(rle.width);
      if (run_sum(rle.runs) != expected) {
        throw GeometryError(ctx + ": RLE runs sum to " + std::to_string(run_sum(rle.runs)) +
                            ", expected " + std::to_string(expected));
      }
      inst.mask = std::move(rle);
    } else {
      throw ParseError(ctx + ".segmentation: expected polygon list or RLE object");
    }
    inst.extra =
        extras_of(std::move(obj), {"id", "image_id", "category_id", "segmentation", "iscrowd"});
    ds.instances.push_back(std::move(inst));
  }

  std::unordered_set<std::int64_t> seen;
  for (const ImageRecord &img : ds.images) {
    if (!seen.insert(img.id).second) {
      throw IntegrityError("duplicate image id " + std::to_string(img.id));
    }
  }
  seen.clear();
  for (const CategoryInfo &cat : ds.categories) {
    if (!seen.insert(cat.id).second) {
      throw IntegrityError("duplicate category id " + std::to_string(cat.id));
    }
  }
  seen.clear();
  for (const InstanceRecord &inst : ds.instances) {
    if (!seen.insert(inst.id).second) {
      throw IntegrityError("duplicate annotation id " + std::to_string(inst.id));
    }
  }
  const DatasetIndex index(ds);
  for (const InstanceRecord &inst : ds.instances) {
    if (!index.has_image(inst.image_id)) {
      throw IntegrityError("annotation " + std::to_string(inst.id) + " references missing image " +
                           std::to_string(inst.image_id));
    }
    if (!index.has_category(inst.category_id)) {
      throw IntegrityError("annotation " + std::to_string(inst.id) +
                           " references missing category " + std::to_string(inst.category_id));
    }
  }
  return ds;
}

Dataset load_coco(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_coco(bytes);
}

std::string emit_coco(const Dataset &dataset, std::span<const ImageId> kept_image_ids) {
  const DatasetIndex index(dataset);
  std::vector<bool> keep(dataset.images.size(), false);
  for (ImageId id : kept_image_ids) {
    if (!index.has_image(id)) {
      throw ArgumentError("kept image id " + std::to_string(id) + " is not in the dataset");
    }
    const std::size_t pos = index.image_position(id);
    if (keep[pos]) throw ArgumentError("kept image id " + std::to_string(id) + " repeated");
    keep[pos] = true;
  }

  Json images = Json::array();
  std::unordered_set<ImageId> kept_ids;
  for (std::size_t i = 0; i < dataset.images.size(); ++i) {
    if (!keep[i]) continue;
    const ImageRecord &img = dataset.images[i];
    kept_ids.insert(img.id);
    Json obj = img.extra.is_object() ? img.extra : Json::object();
    put(obj, "id", img.id);
    put(obj, "file_name", img.file_name);
    put(obj, "width", img.width);
    put(obj, "height", img.height);
    images.push_back(std::move(obj));
  }

  Json annotations = Json::array();
  for (const InstanceRecord &inst : dataset.instances) {
    if (!kept_ids.contains(inst.image_id)) continue;
    Json obj = inst.extra.is_object() ? inst.extra : Json::object();
    put(obj, "id", inst.id);
    put(obj, "image_id", inst.image_id);
    put(obj, "category_id", inst.category_id);
    put(obj, "segmentation", to_json(inst.mask));
    put(obj, "iscrowd", inst.is_crowd ? 1 : 0);
    annotations.push_back(std::move(obj));
  }

  Json categories = Json::array();
  for (const CategoryInfo &cat : dataset.categories) {
    Json obj = cat.extra.is_object() ? cat.extra : Json::object();
    put(obj, "id", cat.id);
    put(obj, "name", cat.name);
    categories.push_back(std::move(obj));
  }

  Json root = dataset.passthrough.is_object() ? dataset.passthrough : Json::object();
  put(root, kImages, std::move(images));
  put(root, kAnnotations, std::move(annotations));
  put(root, kCategories, std::move(categories));
  return root.dump();
}

std::string emit_coco(const Dataset &dataset) {
  std::vector<ImageId> all;
  all.reserve(dataset.images.size());
  for (const ImageRecord &img : dataset.images) all.push_back(img.id);
  return emit_coco(dataset, all);
}

std::vector<Diagnostic> validate(const Dataset &dataset) {
  using Kind = Diagnostic::Kind;
  std::vector<Diagnostic> out;
  auto report = [&out](Kind kind, std::int64_t id, std::string message) {
    out.push_back({kind, id, std::move(message)});
  };

  std::unordered_set<ImageId> image_ids;
  for (const ImageRecord &img : dataset.images) {
    const std::string name = "image " + std::to_string(img.id);
    if (img.id <= 0) report(Kind::kBadId, img.id, name + ": id must be positive");
    if (!image_ids.insert(img.id).second) report(Kind::kDuplicateId, img.id, name + ": duplicate id");
    if (img.width < 1 || img.height < 1) {
      report(Kind::kBadImage, img.id, name + ": width and height must be >= 1");
    }
  }
  std::unordered_set<CategoryId> category_ids;
  for (const CategoryInfo &cat : dataset.categories) {
    const std::string name = "category " + std::to_string(cat.id);
    if (cat.id <= 0) report(Kind::kBadId, cat.id, name + ": id must be positive");
    if (!category_ids.insert(cat.id).second) {
      report(Kind::kDuplicateId, cat.id, name + ": duplicate id");
    }
    if (cat.name.empty()) report(Kind::kBadCategory, cat.id, name + ": empty name");
  }

  std::unordered_set<InstanceId> instance_ids;
  for (const InstanceRecord &inst : dataset.instances) {
    const std::string name = "annotation " + std::to_string(inst.id);
    if (inst.id <= 0) report(Kind::kBadId, inst.id, name + ": id must be positive");
    if (!instance_ids.insert(inst.id).second) {
      report(Kind::kDuplicateId, inst.id, name + ": duplicate id");
    }
    if (!image_ids.contains(inst.image_id)) {
      report(Kind::kDanglingReference, inst.id,
             name + ": references missing image " + std::to_string(inst.image_id));
    }
    if (!category_ids.contains(inst.category_id)) {
      report(Kind::kDanglingReference, inst.id,
             name + ": references missing category " + std::to_string(inst.category_id));
    }

    if (const auto *poly = std::get_if<PolygonSet>(&inst.mask)) {
      if (poly->rings.empty()) report(Kind::kBadRing, inst.id, name + ": polygon set has no rings");
      for (std::size_t r = 0; r < poly->rings.size(); ++r) {
        const Ring &ring = poly->rings[r];
        const std::string ring_name = name + " ring " + std::to_string(r);
        if (ring.size() < 3) {
          report(Kind::kBadRing, inst.id,
                 ring_name + ": " + std::to_string(ring.size()) + " vertices, need at least 3");
        }
        for (const Point &p : ring) {
          if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            report(Kind::kBadRing, inst.id, ring_name + ": non-finite vertex");
            break;
          }
        }
      }
    } else {
      const auto &rle = std::get<RasterRle>(inst.mask);
      const std::uint64_t expected =
          static_cast<std::uint64_t>(std::max(rle.height, 0)) * std::max(rle.width, 0);
      if (rle.height < 0 || rle.width < 0) {
        report(Kind::kBadRle, inst.id, name + ": negative RLE size");
      }
      if (run_sum(rle.runs) != expected) {
        report(Kind::kBadRle, inst.id,
               name + ": RLE runs sum to " + std::to_string(run_sum(rle.runs)) + ", expected " +
                   std::to_string(expected));
      }
      for (std::size_t i = 1; i < rle.runs.size(); ++i) {
        if (rle.runs[i] == 0 && rle.runs[i - 1] == 0) {
          report(Kind::kBadRle, inst.id, name + ": consecutive zero runs at " + std::to_string(i));
          break;
        }
      }
    }
  }
  return out;
}

DatasetIndex::DatasetIndex(const Dataset &dataset) : by_image_(dataset.images.size()) {
  image_pos_.reserve(dataset.images.size());
  for (std::size_t i = 0; i < dataset.images.size(); ++i) {
    image_pos_.emplace(dataset.images[i].id, i);
  }
  for (std::size_t i = 0; i < dataset.categories.size(); ++i) {
    category_pos_.emplace(dataset.categories[i].id, i);
  }
  for (std::size_t i = 0; i < dataset.instances.size(); ++i) {
    auto it = image_pos_.find(dataset.instances[i].image_id);
    if (it != image_pos_.end()) by_image_[it->second].push_back(i);
  }
}

std::span<const std::size_t> DatasetIndex::instances_of(ImageId id) const {
  auto it = image_pos_.find(id);
  if (it == image_pos_.end()) return {};
  return by_image_[it->second];
}

}  // namespace maskprune
