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

#ifndef RELOC_REFINE_HPP_
#define RELOC_REFINE_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reloc/explorer.hpp"
#include "reloc/expr.hpp"
#include "reloc/type.hpp"

namespace reloc {

/**
 * A finite relation on closed values; the interpretation of a type variable.
 * An opaque relation has no pairs: values of its type are never compared and
 * clients only pass back values they obtained from the module.
 */
struct Rel {
  std::string name;
  std::vector<std::pair<Val, Val>> pairs;
  bool opaque = false;

  bool contains(const Val &a, const Val &b) const;
};

/** Δ: interpretations of free type variables, De Bruijn indexed. */
class RelEnv {
 public:
  RelEnv() = default;

  std::size_t depth() const { return stack_.size(); }
  /** Interpretation of type variable `i` (0 is the innermost binder). */
  const Rel *lookup(std::size_t i) const;
  RelEnv push(Rel r) const;

 private:
  std::vector<Rel> stack_;  // back() is index 0
};

enum class Relatedness : std::uint8_t { Related, NotRelated, Deferred, DepthExhausted };

const char *to_string(Relatedness r);

/**
 * Value interpretation of `t` under `delta`. Arrow, forall and exists
 * positions are Deferred: they are exercised behaviourally by
 * check_refinement. References relate when both cells exist and their
 * current contents relate at one less depth.
 */
Relatedness relate_values(const Type &t, const RelEnv &delta, const Val &v1, const Val &v2,
                          const Heap &h1, const Heap &h2, std::size_t depth);

/** Related argument pairs for one arrow domain. */
struct ArgPairs {
  /** Closed expressions; values except at reference types, where they allocate. */
  std::vector<std::pair<Expr, Expr>> pairs;
  /** True when `pairs` covers the whole relation at this type. */
  bool exhaustive = true;
};

/**
 * Unit, both booleans, ints 0, 1, -1, 2, -2 (diagonal), Δ's pairs at type
 * variables, and products/sums/folds built recursively. Truncated to
 * `budget` pairs. Arrow and quantified domains yield nothing.
 */
ArgPairs gen_related_args(const Type &t, const RelEnv &delta, std::size_t budget);

struct CheckBounds {
  Bounds left;
  Bounds right;
  std::size_t arg_budget = 3;  // pairs per arrow domain and calls per driver
  std::size_t mu_depth = 8;
  bool concurrent_calls = false;
  /** Interpretations tried at each forall instantiation. */
  std::vector<Rel> forall_candidates = default_forall_candidates();
  /** Witnesses for existential positions, used in order of appearance. */
  std::vector<Rel> witnesses;
  /** Host threads checking independent client programs; 0 reads RELOC_WORKERS. */
  std::size_t workers = 0;

  static std::vector<Rel> default_forall_candidates();
};

/** Number of worker threads from RELOC_WORKERS (default 1). */
std::size_t workers_from_env();

struct Verdict {
  enum class Tag : std::uint8_t { NoCounterexample, Counterexample, Inconclusive };

  Tag tag = Tag::NoCounterexample;
  /** NoCounterexample only: every exploration closed and every domain was exhausted. */
  bool complete = true;
  std::string message;

  // Counterexample data.
  bool stuck = false;
  std::optional<Outcome> left_outcome;
  std::optional<StuckThread> left_stuck;
  Expr left_program;   // the closed program whose execution is reported
  Expr right_program;
  std::vector<Val> right_values;  // right outcomes found (bounded sample)
  bool right_complete = true;
  std::string client;  // description of the client program or context

  // Statistics.
  std::size_t states_visited = 0;
  std::size_t clients_checked = 0;
  BoundHit bound_hit = BoundHit::None;
};

const char *to_string(Verdict::Tag tag);

/**
 * Bounded check of e1 ≾ e2 : t under Δ. Observable types compare outcome
 * sets directly; higher-order types are exercised by generated client
 * programs that call the module's operations (sequentially and, with
 * `concurrent_calls`, in pairs on two threads) and observe all results
 * jointly.
 */
Verdict check_refinement(const Expr &e1, const Expr &e2, const Type &t, const RelEnv &delta,
                         const CheckBounds &bounds);

enum class CtxMode : std::uint8_t { Plain, TrueAdequate };

/**
 * Contextual refinement in one context. Plain: a terminating run of C[e1]
 * must be matched by some terminating run of C[e2]. TrueAdequate: C must
 * have type bool, and C[e1] reaching true must be matched by C[e2] reaching
 * true. Throws TypeError when a plugging is ill-typed.
 */
Verdict check_ctx(const Expr &context, const Expr &e1, const Expr &e2, const Type &hole_type, CtxMode mode,
                  const CheckBounds &bounds);

/** check_refinement in both directions. */
std::pair<Verdict, Verdict> check_equivalence(const Expr &e1, const Expr &e2, const Type &t,
                                              const RelEnv &delta, const CheckBounds &bounds);

}  // namespace reloc

#endif  // RELOC_REFINE_HPP_
