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

#ifndef RELOC_PARSER_HPP_
#define RELOC_PARSER_HPP_

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "reloc/expr.hpp"
#include "reloc/type.hpp"

namespace reloc {

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, UnboundTypeVar };

  ParseError(Kind kind, std::string message, SourceSpan span, std::vector<std::string> expected);

  Kind kind() const { return kind_; }
  const SourceSpan &span() const { return span_; }
  /** Tokens that would have been accepted at the error position. */
  const std::vector<std::string> &expected() const { return expected_; }

 private:
  Kind kind_;
  SourceSpan span_;
  std::vector<std::string> expected_;
};

/** Closed named types usable in type syntax, e.g. `TBit`. */
using TypeAliases = std::map<std::string, Type, std::less<>>;

/** The built-in aliases: TBit. */
const TypeAliases &default_type_aliases();

Expr parse_expr(std::string_view text, const TypeAliases &aliases = default_type_aliases());
Type parse_type(std::string_view text, const TypeAliases &aliases = default_type_aliases());

/**
 * Contents of an `.rl` file: one expression plus optional pragma lines
 * `#type: T` (the program's type) and `#hole: T` (for contexts, the type of
 * the hole).
 */
struct Program {
  std::optional<Type> declared_type;
  std::optional<Type> hole_type;
  Expr body;
};

Program parse_program(std::string_view text, const TypeAliases &aliases = default_type_aliases());

/** Inverse of parse_expr: parse_expr(pretty(e)) == e. */
std::string pretty(const Expr &e);
std::string pretty(const Val &v);
std::string pretty_type(const Type &t);

}  // namespace reloc

#endif  // RELOC_PARSER_HPP_
