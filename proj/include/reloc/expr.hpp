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

#ifndef RELOC_EXPR_HPP_
#define RELOC_EXPR_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reloc/type.hpp"

namespace reloc {

/** Byte offsets and 1-based line/column of the first byte. */
struct SourceSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t line = 0;
  std::size_t column = 0;

  bool valid() const { return start <= end; }
};

enum class ExprKind : std::uint8_t {
  Var,
  Unit,
  Bool,
  Int,
  Loc,    // runtime only
  Proph,  // runtime only
  Pair,
  Proj,
  Inl,
  Inr,
  Match,
  Rec,
  App,
  TLam,
  TApp,
  Pack,
  Unpack,
  Fold,
  Unfold,
  If,
  BinOp,
  UnOp,
  Ref,
  Load,
  Store,
  Cas,
  Fork,
  NewProph,
  Resolve,
  Ascribe,  // surface only, erased before evaluation
  Hole,     // contexts only
};

enum class BinOpKind : std::uint8_t { Add, Sub, Mul, Eq, Lt, And };
enum class UnOpKind : std::uint8_t { Not };

/** Binder name used for anonymous functions, `let _` and sequencing. */
inline constexpr std::string_view kAnon = "_";

/**
 * An immutable expression tree with structural sharing.
 *
 * Nodes cache whether they are values, a structural hash, whether they
 * mention runtime identifiers (locations, prophecy ids), whether they
 * contain a hole, and their sorted free variables. Equality is structural
 * and ignores source spans.
 *
 * Child layout by kind:
 *   Pair(a, b)  Proj(e) [index 1|2]  Inl(e)  Inr(e)
 *   Match(e, b1, b2) [name: x1, name2: x2]
 *   Rec(body) [name: f, name2: x]  App(fn, arg)  TLam(body)  TApp(e)
 *   Pack(e)  Unpack(e, body) [name: x]  Fold(e)  Unfold(e)
 *   If(c, t, e)  BinOp(a, b)  UnOp(e)  Ref(e)  Load(e)  Store(l, v)
 *   Cas(l, expected, desired)  Fork(e)  Resolve(p, v)  Ascribe(e) [type]
 */
class Expr {
 public:
  Expr();  // unit literal

  static Expr var(std::string name, SourceSpan span = {});
  static Expr unit(SourceSpan span = {});
  static Expr boolean(bool b, SourceSpan span = {});
  static Expr integer(std::int64_t n, SourceSpan span = {});
  static Expr loc(std::size_t id);
  static Expr proph(std::size_t id);
  static Expr pair(Expr a, Expr b, SourceSpan span = {});
  static Expr proj(int index, Expr e, SourceSpan span = {});
  static Expr inl(Expr e, SourceSpan span = {});
  static Expr inr(Expr e, SourceSpan span = {});
  static Expr match(Expr scrutinee, std::string x1, Expr b1, std::string x2, Expr b2,
                    SourceSpan span = {});
  static Expr rec(std::string f, std::string x, Expr body, SourceSpan span = {});
  static Expr lam(std::string x, Expr body, SourceSpan span = {});
  static Expr app(Expr fn, Expr arg, SourceSpan span = {});
  /** `let x = bound in body`, i.e. `(λ x. body) bound`. */
  static Expr let(std::string x, Expr bound, Expr body, SourceSpan span = {});
  /** `first; second`, i.e. `let _ = first in second`. */
  static Expr seq(Expr first, Expr second, SourceSpan span = {});
  static Expr tlam(Expr body, SourceSpan span = {});
  static Expr tapp(Expr e, SourceSpan span = {});
  static Expr pack(Expr e, SourceSpan span = {});
  static Expr unpack(Expr e, std::string x, Expr body, SourceSpan span = {});
  static Expr fold(Expr e, SourceSpan span = {});
  static Expr unfold(Expr e, SourceSpan span = {});
  static Expr if_(Expr c, Expr t, Expr e, SourceSpan span = {});
  static Expr binop(BinOpKind op, Expr a, Expr b, SourceSpan span = {});
  static Expr unop(UnOpKind op, Expr e, SourceSpan span = {});
  static Expr ref(Expr e, SourceSpan span = {});
  static Expr load(Expr e, SourceSpan span = {});
  static Expr store(Expr l, Expr v, SourceSpan span = {});
  static Expr cas(Expr l, Expr expected, Expr desired, SourceSpan span = {});
  static Expr fork(Expr e, SourceSpan span = {});
  static Expr new_proph(SourceSpan span = {});
  static Expr resolve(Expr p, Expr v, SourceSpan span = {});
  static Expr ascribe(Expr e, Type t, SourceSpan span = {});
  static Expr hole(SourceSpan span = {});

  ExprKind kind() const;
  std::size_t arity() const;
  const Expr &child(std::size_t i) const;
  std::span<const Expr> children() const;

  /** Var name; Rec function name; Match left binder; Unpack binder. */
  const std::string &name() const;
  /** Rec parameter; Match right binder. */
  const std::string &name2() const;

  bool bool_value() const;
  std::int64_t int_value() const;
  std::size_t loc_id() const;
  std::size_t proph_id() const;
  int proj_index() const;
  BinOpKind binop_kind() const;
  UnOpKind unop_kind() const;
  const Type &type() const;  // Ascribe
  const SourceSpan &span() const;

  bool is_value() const;
  bool has_runtime_ids() const;
  std::size_t hole_count() const;
  /** Sorted, duplicate free. */
  const std::vector<std::string> &free_vars() const;
  bool is_closed() const { return free_vars().empty(); }
  bool has_free_var(std::string_view x) const;
  std::uint64_t hash() const;

  /** Same node kind and payload, new children. Keeps the span. */
  Expr with_children(std::vector<Expr> children) const;

  /** Pointer identity, for fast paths. */
  bool same_node(const Expr &other) const { return node_ == other.node_; }

  friend bool operator==(const Expr &a, const Expr &b);
  friend bool operator!=(const Expr &a, const Expr &b) { return !(a == b); }

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> node);
  static Expr make(Node node);
  std::shared_ptr<const Node> node_;
};

/**
 * A closed runtime value. Values are the expression forms
 * literal | location | proph-id | (v, v) | inl v | inr v | rec f x = e |
 * Λ e | pack v | fold v.
 */
class Val {
 public:
  Val() = default;  // unit
  /** Throws std::invalid_argument when `e` is not a value. */
  explicit Val(Expr e);

  const Expr &expr() const { return expr_; }
  ExprKind kind() const { return expr_.kind(); }

  friend bool operator==(const Val &a, const Val &b) { return a.expr_ == b.expr_; }
  friend bool operator!=(const Val &a, const Val &b) { return !(a == b); }

 private:
  Expr expr_;
};

/** Replaces free occurrences of `x` by the closed value `v`. */
Expr subst(const Expr &e, std::string_view x, const Val &v);

/** Removes every Ascribe node. */
Expr erase_ascriptions(const Expr &e);

/** Replaces the (single) Hole in `context` by `e`. */
Expr plug(const Expr &context, const Expr &e);

enum class FrameKind : std::uint8_t {
  AppArg,  // fn (□); fn is the pending function expression
  AppFun,  // □ (v); the argument is already a value
  PairL,   // (□, e2)
  PairR,   // (v1, □)
  Proj,
  Inl,
  Inr,
  Match,
  If,
  TApp,
  Pack,
  Unpack,
  Fold,
  Unfold,
  BinOpL,  // □ op e2
  BinOpR,  // v1 op □
  UnOp,
  Ref,
  Load,
  StoreVal,  // e_loc <- □
  StoreLoc,  // □ <- v
  CasL,      // CAS(□, e2, e3)
  CasM,      // CAS(v1, □, e3)
  CasR,      // CAS(v1, v2, □)
  ResolveL,  // resolve □ e2
  ResolveR,  // resolve v1 □
  Ascribe,
};

/**
 * One evaluation-context constructor. `node` is the enclosing expression
 * with the hole position still occupied by the old subterm; `slot` is the
 * child index the hole stands for.
 */
struct Frame {
  FrameKind kind;
  Expr node;
  std::size_t slot = 0;
};

/** Frames listed outermost first; fill plugs innermost first. */
using EvalCtx = std::vector<Frame>;

/** Builds the frame for `node` with its hole at child `slot`. */
Frame make_frame(const Expr &node, std::size_t slot);

Expr fill(const EvalCtx &ctx, const Expr &e);

}  // namespace reloc

#endif  // RELOC_EXPR_HPP_
