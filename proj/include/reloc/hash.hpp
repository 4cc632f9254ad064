// Copyright 2026 The relocheck Authors
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

#ifndef RELOC_HASH_HPP_
#define RELOC_HASH_HPP_

#include <cstdint>
#include <functional>
#include <string_view>

namespace reloc {

inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

inline std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t v) {
  return mix64(seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)));
}

inline std::uint64_t hash_string(std::string_view s) {
  return std::hash<std::string_view>{}(s);
}

/** Two independent 64-bit lanes; used where collisions must be negligible. */
class Hasher128 {
 public:
  void add(std::uint64_t v) {
    a_ = mix64(a_ ^ (v + 0x9e3779b97f4a7c15ULL));
    b_ = mix64((b_ + v) * 0xff51afd7ed558ccdULL ^ 0xc4ceb9fe1a85ec53ULL);
  }
  std::uint64_t hi() const { return a_; }
  std::uint64_t lo() const { return b_; }

 private:
  std::uint64_t a_ = 0x243f6a8885a308d3ULL;
  std::uint64_t b_ = 0x13198a2e03707344ULL;
};

}  // namespace reloc

#endif  // RELOC_HASH_HPP_
