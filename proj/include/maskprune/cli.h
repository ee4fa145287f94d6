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

#ifndef MASKPRUNE_CLI_H_
#define MASKPRUNE_CLI_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace maskprune {

enum class Method { kCb, kSi, kScs, kRandom };

struct RunConfig {
  std::string annotations;
  std::string out;
  std::string report;
  double pruning_rate = 0.0;
  Method method = Method::kCb;
  std::optional<std::uint64_t> seed;
  bool skip_crowd = false;
  unsigned workers = 1;
};

/// Exit codes.
constexpr int kExitOk = 0;
constexpr int kExitParse = 1;      // unreadable input, bad flags, codec errors
constexpr int kExitIntegrity = 2;  // dangling ids, RLE/grid mismatch

/// Entry point for `maskprune score|prune|stats|synth`. A single JSON summary
/// line goes to `out`; human-readable logs go to `err`.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace maskprune

#endif  // MASKPRUNE_CLI_H_
