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

#ifndef RELOC_TYPECHECK_HPP_
#define RELOC_TYPECHECK_HPP_

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "reloc/expr.hpp"
#include "reloc/type.hpp"

namespace reloc {

/**
 * Ξ | Γ. `xi` counts type variables in scope (free De Bruijn indices below
 * `xi` are rigid). `heap` types runtime locations and is empty for source
 * programs.
 */
struct TypeEnv {
  std::size_t xi = 0;
  std::map<std::string, Type, std::less<>> gamma;
  std::map<std::size_t, Type> heap;  // location id -> payload type

  TypeEnv with(std::string name, Type t) const {
    TypeEnv copy = *this;
    copy.gamma.insert_or_assign(std::move(name), std::move(t));
    return copy;
  }
};

class TypeError : public std::runtime_error {
 public:
  enum class Kind {
    Mismatch,
    UnboundVar,
    NotAFunction,
    EqTypeViolation,
    NeedsAnnotation,
    EscapingTypeVar,
    HoleUnderBinder,
  };

  TypeError(Kind kind, std::string message, SourceSpan span);

  Kind kind() const { return kind_; }
  const SourceSpan &span() const { return span_; }

 private:
  Kind kind_;
  SourceSpan span_;
};

const char *to_string(TypeError::Kind kind);

/** Infers the type of `e`. Throws TypeError. */
Type synth(const TypeEnv &env, const Expr &e);

/** Checks `e` against `expected`. Throws TypeError. */
void check(const TypeEnv &env, const Expr &e, const Type &expected);

/**
 * Types a program context whose single hole stands for a closed term of
 * type `hole_type`; returns the type of the plugged program.
 */
Type typecheck_context(const TypeEnv &env, const Expr &context, const Type &hole_type);

/**
 * Convenience: checks against `declared` when given, otherwise synthesizes.
 * Returns the resulting type.
 */
Type typecheck_program(const Expr &e, const std::optional<Type> &declared);

}  // namespace reloc

#endif  // RELOC_TYPECHECK_HPP_
