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

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>

#include "maskprune/errors.h"
#include "maskprune/geometry.h"

namespace maskprune {

BitMask rle_decode(std::span<const std::uint32_t> runs, int height, int width) {
  BitMask mask(height, width);
  std::uint64_t total = 0;
  for (std::uint32_t r : runs) total += r;
  const std::uint64_t expected = static_cast<std::uint64_t>(height) * static_cast<std::uint64_t>(width);
  if (total != expected) {
    throw GeometryError("RLE runs sum to " + std::to_string(total) + ", expected " +
                        std::to_string(expected) + " (" + std::to_string(height) + "x" +
                        std::to_string(width) + ")");
  }
  auto bits = mask.column_major();
  std::size_t pos = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (i % 2 == 1) {
      std::fill_n(bits.begin() + pos, runs[i], std::uint8_t{1});
    }
    pos += runs[i];
  }
  return mask;
}

RunList rle_encode(const BitMask &mask) {
  RunList runs;
  std::uint8_t current = 0;
  std::uint32_t count = 0;
  for (std::uint8_t b : mask.column_major()) {
    if (b != current) {
      runs.push_back(count);
      count = 0;
      current = b;
    }
    ++count;
  }
  runs.push_back(count);
  return runs;
}

RunList canonicalize_runs(std::span<const std::uint32_t> runs) {
  RunList out;
  out.push_back(runs.empty() ? 0 : runs[0]);
  for (std::size_t i = 1; i < runs.size(); ++i) {
    if (runs[i] == 0) continue;
    const bool foreground = i % 2 == 1;
    const bool last_foreground = (out.size() - 1) % 2 == 1;
    if (foreground == last_foreground) {
      out.back() += runs[i];
    } else {
      out.push_back(runs[i]);
    }
  }
  return out;
}

RunList coco_counts_decode(std::string_view counts) {
  RunList runs;
  std::size_t k = 0;
  while (k < counts.size()) {
    std::int64_t x = 0;
    int chunks = 0;
    bool more = true;
    while (more) {
      if (k >= counts.size()) {
        throw CodecError("truncated counts string at byte " + std::to_string(k));
      }
      const char ch = counts[k];
      if (ch < 48 || ch > 111) {
        throw CodecError("counts character out of range at byte " + std::to_string(k));
      }
      if (chunks >= 12) {
        throw CodecError("counts value too long at byte " + std::to_string(k));
      }
      const int c = ch - 48;
      x |= static_cast<std::int64_t>(c & 0x1f) << (5 * chunks);
      more = (c & 0x20) != 0;
      ++k;
      ++chunks;
      if (!more && (c & 0x10)) x |= static_cast<std::int64_t>(-1) << (5 * chunks);
    }
    if (runs.size() > 2) x += runs[runs.size() - 2];
    if (x < 0 || x > std::numeric_limits<std::uint32_t>::max()) {
      throw CodecError("counts decode produced run " + std::to_string(x) + " at index " +
                       std::to_string(runs.size()));
    }
    runs.push_back(static_cast<std::uint32_t>(x));
  }
  return runs;
}

std::string coco_counts_encode(std::span<const std::uint32_t> runs) {
  std::string out;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    std::int64_t x = runs[i];
    if (i > 2) x -= runs[i - 2];
    bool more = true;
    while (more) {
      int c = static_cast<int>(x & 0x1f);
      x >>= 5;
      more = (c & 0x10) ? x != -1 : x != 0;
      if (more) c |= 0x20;
      out.push_back(static_cast<char>(c + 48));
    }
  }
  return out;
}

}  // namespace maskprune
