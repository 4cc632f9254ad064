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


#ifndef RELOC_TESTS_ORACLES_HPP_
#define RELOC_TESTS_ORACLES_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "reloc/expr.hpp"
#include "reloc/semantics.hpp"
#include "reloc/type.hpp"
#include "reloc/typecheck.hpp"

namespace reloc::oracle {

using Rng = std::mt19937_64;

// Generators.

/** A closed type of at most `depth` levels, over all formers except Proph. */
Type random_type(Rng &rng, int depth);

/** Any type, possibly with free indices below `free`. */
Type random_open_type(Rng &rng, int depth, std::size_t free);

/** A surface expression (no runtime ids, no hole) of at most `depth` levels. */
Expr random_surface_expr(Rng &rng, int depth);

/** A small loop-free concurrent program over one or two references. */
Expr random_small_program(Rng &rng);

/** A closed well-typed program of type int or bool without pack, Λ or fold. */
Expr random_typed_program(Rng &rng, const Type &target);

/** A configuration with locations and prophecy ids spread across threads and heap. */
Config random_config(Rng &rng);

/** The same configuration with locations and prophecy ids consistently renamed. */
Config random_renaming(const Config &cfg, Rng &rng);

// Oracles.

/** type_subst computed on a named-variable representation. */
Type named_type_subst(const Type &body, const Type &arg);

/**
 * A value together with its reachable heap, written with locations and
 * prophecy ids renamed in order of first appearance.
 */
std::string normalize_outcome(const Val &v, const Heap &heap);

struct NaiveReport {
  std::set<std::string> outcomes;  // normalize_outcome of every terminating state
  bool stuck = false;
  bool step_bound_hit = false;
  std::size_t longest_path = 0;
};

/** Enumerates every schedule from init_config(e) without memoization. */
NaiveReport naive_explore(const Expr &e, std::size_t max_steps);

/** Types a runtime value whose locations hold ground data (used for heap typing). */
std::optional<Type> ground_value_type(const Expr &v);

// Typing rules.

struct TypingCase {
  std::string rule;
  bool positive = true;
  std::string source;
  std::optional<std::string> declared;  // checked against this type when present
  std::string expected_type;            // positive cases
  TypeError::Kind expected_error = TypeError::Kind::Mismatch;  // negative cases
};

inline void PrintTo(const TypingCase &c, std::ostream *os) {
  *os << c.rule << (c.positive ? " (positive): " : " (negative): ") << c.source;
}

/** One positive and one negative case per typing rule. */
const std::vector<TypingCase> &typing_cases();

/** Runs a case; on failure returns a description. */
std::optional<std::string> run_typing_case(const TypingCase &c);

}  // namespace reloc::oracle

#endif  // RELOC_TESTS_ORACLES_HPP_
