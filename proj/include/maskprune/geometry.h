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

#ifndef MASKPRUNE_GEOMETRY_H_
#define MASKPRUNE_GEOMETRY_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace maskprune {

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point &) const = default;
};

using Ring = std::vector<Point>;

/// COCO polygon segmentation: disjoint parts, no hole semantics.
struct PolygonSet {
  std::vector<Ring> rings;
  bool operator==(const PolygonSet &) const = default;
};

/// Column-major run lengths, alternating background/foreground, starting
/// with background (possibly a zero-length run).
using RunList = std::vector<std::uint32_t>;

/// How `counts` was spelled in the source file; emission reproduces it.
enum class CountsFormat { kCompressed, kList };

struct RasterRle {
  int height = 0;
  int width = 0;
  RunList runs;
  CountsFormat format = CountsFormat::kCompressed;
  bool operator==(const RasterRle &) const = default;
};

using MaskGeometry = std::variant<PolygonSet, RasterRle>;

/// Materialized binary mask. Storage is column-major to match RLE order.
class BitMask {
 public:
  BitMask() = default;
  BitMask(int height, int width);

  int height() const { return height_; }
  int width() const { return width_; }

  bool at(int row, int col) const {
    return bits_[static_cast<std::size_t>(col) * height_ + row] != 0;
  }
  void set(int row, int col, bool value = true) {
    bits_[static_cast<std::size_t>(col) * height_ + row] = value ? 1 : 0;
  }

  /// Column-major view, one byte per pixel.
  std::span<const std::uint8_t> column_major() const { return bits_; }
  std::span<std::uint8_t> column_major() { return bits_; }

  bool operator==(const BitMask &) const = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<std::uint8_t> bits_;
};

struct ShapeMetrics {
  double perimeter = 0.0;
  double area = 0.0;

  /// True when the mask encloses no area. Polygon areas below a
  /// 1e-12 * perimeter^2 floor count as zero (collinear rounding noise).
  bool degenerate() const;
};

double polygon_area(std::span<const Point> ring);
double polygon_perimeter(std::span<const Point> ring);
ShapeMetrics polygon_set_metrics(const PolygonSet &mask);

BitMask rle_decode(std::span<const std::uint32_t> runs, int height, int width);
RunList rle_encode(const BitMask &mask);

/// Merges interior zero-length runs and drops trailing ones, keeping a
/// leading zero. rle_encode(rle_decode(r)) == canonicalize_runs(r).
RunList canonicalize_runs(std::span<const std::uint32_t> runs);

/// COCO compressed counts: 6-bit chunks over ASCII 48..111, with
/// second-order delta coding for run index > 2 (matches pycocotools).
RunList coco_counts_decode(std::string_view counts);
std::string coco_counts_encode(std::span<const std::uint32_t> runs);

/// Area is the set-pixel count; perimeter counts 4-neighbour edges that face
/// a clear pixel or the grid border.
ShapeMetrics raster_metrics(const BitMask &mask);

ShapeMetrics instance_metrics(const MaskGeometry &mask);

}  // namespace maskprune

#endif  // MASKPRUNE_GEOMETRY_H_
