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

#ifndef RELOC_SEMANTICS_HPP_
#define RELOC_SEMANTICS_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "reloc/expr.hpp"

namespace reloc {

/**
 * Locations are allocated densely: location `i` lives in `cells[i]` and the
 * next fresh location is `cells.size()`.
 */
struct Heap {
  std::vector<Val> cells;

  std::size_t next_fresh() const { return cells.size(); }
  bool contains(std::size_t loc) const { return loc < cells.size(); }
  const Val &at(std::size_t loc) const { return cells.at(loc); }

  friend bool operator==(const Heap &a, const Heap &b) { return a.cells == b.cells; }
};

/** A thread pool (thread 0 is the main thread), a heap and a prophecy counter. */
struct Config {
  std::vector<Expr> threads;
  Heap heap;
  std::size_t next_proph = 0;

  friend bool operator==(const Config &a, const Config &b) {
    return a.next_proph == b.next_proph && a.heap == b.heap && a.threads == b.threads;
  }
};

enum class RuleTag : std::uint8_t { Pure, Alloc, Load, Store, CasFail, CasSuc, Fork, NewProph, Resolve };

const char *to_string(RuleTag tag);

struct StepResult {
  Config config;
  std::size_t thread = 0;
  RuleTag tag = RuleTag::Pure;
};

/** One scheduling decision in a trace. */
struct TraceStep {
  std::size_t thread = 0;
  RuleTag tag = RuleTag::Pure;

  friend bool operator==(const TraceStep &, const TraceStep &) = default;
};
using Trace = std::vector<TraceStep>;

/** Initial configuration: one thread running `e` with ascriptions erased. */
Config init_config(const Expr &e);

struct Decomposition {
  EvalCtx ctx;
  Expr redex;
};

/**
 * Splits `e` into an evaluation context and the next redex. Returns nothing
 * when `e` is a value. The redex may be irreducible (stuck).
 */
std::optional<Decomposition> decompose(const Expr &e);

/** Heap-independent reduction of a head redex; nothing if not a pure redex. */
std::optional<Expr> pure_step(const Expr &redex);

struct HeadStep {
  Expr result;
  RuleTag tag = RuleTag::Pure;
  std::optional<Expr> forked;  // set for Fork
};

/**
 * Reduces a head redex, updating `heap` and `next_proph` in place. Returns
 * nothing when the redex is stuck.
 */
std::optional<HeadStep> head_step(const Expr &redex, Heap &heap, std::size_t &next_proph);

enum class ThreadStatus : std::uint8_t { Stepped, IsValue, Stuck };

struct ThreadStep {
  ThreadStatus status = ThreadStatus::IsValue;
  std::optional<StepResult> step;  // Stepped
  std::optional<Expr> stuck_redex;  // Stuck
};

/** Steps thread `i` of `cfg`. Throws std::out_of_range for a bad index. */
ThreadStep thread_step(const Config &cfg, std::size_t i);

/** Threads that can take a step. */
std::vector<std::size_t> enabled_threads(const Config &cfg);

class ReplayError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/** Re-executes `trace` from `init_config(e)`; throws ReplayError on divergence. */
Config replay(const Expr &e, const Trace &trace);

}  // namespace reloc

#endif  // RELOC_SEMANTICS_HPP_
