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

#ifndef RELOC_EXPLORER_HPP_
#define RELOC_EXPLORER_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "reloc/semantics.hpp"

namespace reloc {

struct Bounds {
  std::size_t max_steps = 10000;  // per path
  std::size_t max_configs = 2000000;
  std::size_t max_threads = 16;
  /**
   * When set, revisiting a configuration that is on the current path counts
   * as exceeding `max_steps` (the schedule can loop forever). Otherwise such
   * cycles are pruned silently.
   */
  bool cycle_is_step_bound = false;
};

enum class BoundHit : std::uint8_t { None, Steps, Configs, Threads };

const char *to_string(BoundHit b);

/** 128-bit digest of a configuration up to renaming of locations and prophecies. */
struct CanonicalKey {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;

  friend bool operator==(const CanonicalKey &, const CanonicalKey &) = default;
  friend auto operator<=>(const CanonicalKey &, const CanonicalKey &) = default;
};

struct CanonicalKeyHash {
  std::size_t operator()(const CanonicalKey &k) const { return static_cast<std::size_t>(k.hi ^ (k.lo << 1)); }
};

/**
 * Key of `cfg` invariant under consistent renaming of location and prophecy
 * ids. Ids are renamed in first-traversal order over the threads, then over
 * the heap cells in discovery order. Cells unreachable from any thread do
 * not contribute.
 */
CanonicalKey canonicalize(const Config &cfg);

/** Key of a value together with the heap reachable from it. */
CanonicalKey canonicalize_value(const Val &v, const Heap &heap);

/** Key of several roots together with the heap reachable from them. */
CanonicalKey canonicalize_roots(std::span<const Expr> roots, const Heap &heap);

struct Outcome {
  Val value;
  Heap heap;
  Trace trace;
  CanonicalKey key;  // canonicalize_value(value, heap)
};

struct StuckThread {
  Config config;
  std::size_t thread = 0;
  Expr redex;
  Trace trace;
};

struct ExploreReport {
  std::vector<Outcome> outcomes;  // one per distinct key, in discovery order
  bool complete = true;
  BoundHit bound_hit = BoundHit::None;
  std::vector<StuckThread> stuck;
  std::size_t states_visited = 0;
};

/** Every terminating outcome of `e` reachable under `bounds`. */
ExploreReport explore_all(const Expr &e, const Bounds &bounds = {});

using OutcomeGoal = std::function<bool(const Val &, const Heap &)>;

struct SearchResult {
  std::optional<Outcome> found;
  /** With no outcome found: true when absence is proven under the bounds. */
  bool complete = true;
  BoundHit bound_hit = BoundHit::None;
  std::size_t states_visited = 0;
};

/** First outcome satisfying `goal`, stopping as soon as one is found. */
SearchResult search_outcome(const Expr &e, const OutcomeGoal &goal, const Bounds &bounds = {});

}  // namespace reloc

#endif  // RELOC_EXPLORER_HPP_
