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

#ifndef RELOC_TYPE_HPP_
#define RELOC_TYPE_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>

namespace reloc {

enum class TypeKind : std::uint8_t {
  Var,  // De Bruijn index
  Unit,
  Bool,
  Int,
  Prod,
  Sum,
  Arrow,
  Forall,
  Exists,
  Rec,
  Ref,
  Proph,
  // Checker-internal. Never produced by the parser.
  Meta,
  Skolem,
};

/**
 * An immutable, structurally shared type.
 *
 * Type variables are De Bruijn indices: `Var(0)` refers to the nearest
 * enclosing `Forall`/`Exists`/`Rec`. `Meta` and `Skolem` only exist inside
 * the typechecker (unification variables and rigid opened binders).
 */
class Type {
 public:
  Type();  // unit

  static Type var(std::size_t index);
  static Type unit();
  static Type boolean();
  static Type integer();
  static Type prod(Type lhs, Type rhs);
  static Type sum(Type lhs, Type rhs);
  static Type arrow(Type dom, Type cod);
  static Type forall(Type body);
  static Type exists(Type body);
  static Type rec(Type body);
  static Type ref(Type payload);
  static Type proph();
  static Type meta(std::size_t id);
  static Type skolem(std::size_t id);

  TypeKind kind() const;
  /** Index of a Var, id of a Meta or Skolem. */
  std::size_t index() const;
  /** First component; the body of binders; the payload of Ref. */
  const Type &lhs() const;
  const Type &rhs() const;
  const Type &body() const { return lhs(); }

  std::uint64_t hash() const;

  friend bool operator==(const Type &a, const Type &b);
  friend bool operator!=(const Type &a, const Type &b) { return !(a == b); }

 struct Node;

 private:
  explicit Type(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

/** Types whose values compare by a single word: unit, bool, int, ref, and sums of those. */
bool eq_type(const Type &t);

/**
 * Shifts free De Bruijn indices >= cutoff by `amount` (which may be
 * negative for indices known to be large enough).
 */
Type shift_type(const Type &t, std::ptrdiff_t amount, std::size_t cutoff = 0);

/**
 * Substitutes `arg` for index 0 in `body` and lowers the remaining free
 * indices by one. This is the `τ[α/τ']` of the typing rules.
 */
Type type_subst(const Type &body, const Type &arg);

/** True iff every Var index is bound when the type sits under `depth` binders. */
bool type_closed(const Type &t, std::size_t depth = 0);

bool contains_meta(const Type &t);
bool contains_skolem(const Type &t, std::size_t id);

/** Types built without arrows or quantifiers (observable at the top level). */
bool is_first_order(const Type &t);

/** ASCII rendering using generated variable names (a, b, ...). */
std::string to_string(const Type &t);

}  // namespace reloc

#endif  // RELOC_TYPE_HPP_
