// Copyright 2026 The Authors.
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

#pragma once

#include <cstdint>

namespace bflab {

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// splitmix64 output with counter semantics: word(seed, i) is the i-th output
/// of the stream seeded at `seed`. Platform-independent by construction.
inline std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed + 0x9e3779b97f4a7c15ull * (index + 1));
}

/// Sequential splitmix64 stream for generators and sampling helpers.
struct SplitMix {
  std::uint64_t seed = 0;
  std::uint64_t counter = 0;

  explicit SplitMix(std::uint64_t s) : seed(s) {}
  std::uint64_t next() { return splitmix64_at(seed, counter++); }
  std::uint64_t below(std::uint64_t m) { return next() % m; }
};

/// Derives an independent child seed (for per-trial transcripts and orders).
inline std::uint64_t child_seed(std::uint64_t root, std::uint64_t index) {
  return mix64(root ^ (0xd1342543de82ef95ull * (index + 1)));
}

}  // namespace bflab
