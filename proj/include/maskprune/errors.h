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

#ifndef MASKPRUNE_ERRORS_H_
#define MASKPRUNE_ERRORS_H_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace maskprune {

/// The annotation document could not be read as a COCO-style file.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string &what,
                      std::optional<std::size_t> byte_offset = std::nullopt)
      : std::runtime_error(what), byte_offset_(byte_offset) {}

  /// Offset of the offending byte, when the failure is lexical.
  std::optional<std::size_t> byte_offset() const { return byte_offset_; }

 private:
  std::optional<std::size_t> byte_offset_;
};

/// Referential integrity is broken (dangling or duplicate ids).
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A mask violates a structural invariant (e.g. RLE runs do not cover the grid).
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A ring has fewer than three vertices, or a mask encloses zero area.
class DegenerateGeometryError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// Malformed COCO compressed `counts` text.
class CodecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace maskprune

#endif  // MASKPRUNE_ERRORS_H_
