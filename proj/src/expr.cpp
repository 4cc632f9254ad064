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

#include "reloc/expr.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <utility>

#include "reloc/hash.hpp"

namespace reloc {

struct Expr::Node {
  ExprKind kind = ExprKind::Unit;
  std::int64_t num = 0;
  std::string name;
  std::string name2;
  std::vector<Expr> kids;
  Type type;
  SourceSpan span;

  bool value = false;
  bool runtime = false;
  std::size_t holes = 0;
  std::vector<std::string> free;
  std::uint64_t hash = 0;
};

namespace {

void merge_free(std::vector<std::string> &into, const std::vector<std::string> &from,
                std::string_view bound1 = {}, std::string_view bound2 = {}) {
  for (const auto &x : from) {
    if ((!bound1.empty() && x == bound1) || (!bound2.empty() && x == bound2)) continue;
    auto it = std::lower_bound(into.begin(), into.end(), x);
    if (it == into.end() || *it != x) into.insert(it, x);
  }
}

}  // namespace

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr::Expr() {
  static const Expr unit_expr = make(Node{});
  node_ = unit_expr.node_;
}

Expr Expr::make(Node n) {
  const auto &k = n.kids;
  switch (n.kind) {
    case ExprKind::Unit:
    case ExprKind::Bool:
    case ExprKind::Int:
    case ExprKind::Loc:
    case ExprKind::Proph:
    case ExprKind::Rec:
    case ExprKind::TLam:
      n.value = true;
      break;
    case ExprKind::Pair:
      n.value = k[0].is_value() && k[1].is_value();
      break;
    case ExprKind::Inl:
    case ExprKind::Inr:
    case ExprKind::Pack:
    case ExprKind::Fold:
      n.value = k[0].is_value();
      break;
    default:
      n.value = false;
  }
  n.runtime = n.kind == ExprKind::Loc || n.kind == ExprKind::Proph;
  n.holes = n.kind == ExprKind::Hole ? 1 : 0;
  for (const auto &c : k) {
    n.runtime = n.runtime || c.has_runtime_ids();
    n.holes += c.hole_count();
  }

  switch (n.kind) {
    case ExprKind::Var:
      n.free.push_back(n.name);
      break;
    case ExprKind::Rec:
      merge_free(n.free, k[0].free_vars(), n.name, n.name2);
      break;
    case ExprKind::Match:
      merge_free(n.free, k[0].free_vars());
      merge_free(n.free, k[1].free_vars(), n.name);
      merge_free(n.free, k[2].free_vars(), n.name2);
      break;
    case ExprKind::Unpack:
      merge_free(n.free, k[0].free_vars());
      merge_free(n.free, k[1].free_vars(), n.name);
      break;
    default:
      for (const auto &c : k) merge_free(n.free, c.free_vars());
  }

  std::uint64_t h = hash_combine(static_cast<std::uint64_t>(n.kind) + 1, static_cast<std::uint64_t>(n.num));
  if (!n.name.empty()) h = hash_combine(h, hash_string(n.name));
  if (!n.name2.empty()) h = hash_combine(h, hash_string(n.name2) + 7);
  if (n.kind == ExprKind::Ascribe) h = hash_combine(h, n.type.hash());
  for (const auto &c : k) h = hash_combine(h, c.hash());
  n.hash = h;
  return Expr(std::make_shared<const Node>(std::move(n)));
}

namespace {

Expr::Node node_of(ExprKind kind, std::vector<Expr> kids, SourceSpan span) {
  Expr::Node n;
  n.kind = kind;
  n.kids = std::move(kids);
  n.span = span;
  return n;
}

}  // namespace

Expr Expr::var(std::string name, SourceSpan span) {
  auto n = node_of(ExprKind::Var, {}, span);
  n.name = std::move(name);
  return make(std::move(n));
}
Expr Expr::unit(SourceSpan span) {
  if (span.end == 0 && span.start == 0) return Expr();
  return make(node_of(ExprKind::Unit, {}, span));
}
Expr Expr::boolean(bool b, SourceSpan span) {
  auto n = node_of(ExprKind::Bool, {}, span);
  n.num = b ? 1 : 0;
  return make(std::move(n));
}
Expr Expr::integer(std::int64_t v, SourceSpan span) {
  auto n = node_of(ExprKind::Int, {}, span);
  n.num = v;
  return make(std::move(n));
}
Expr Expr::loc(std::size_t id) {
  auto n = node_of(ExprKind::Loc, {}, {});
  n.num = static_cast<std::int64_t>(id);
  return make(std::move(n));
}
Expr Expr::proph(std::size_t id) {
  auto n = node_of(ExprKind::Proph, {}, {});
  n.num = static_cast<std::int64_t>(id);
  return make(std::move(n));
}
Expr Expr::pair(Expr a, Expr b, SourceSpan span) {
  return make(node_of(ExprKind::Pair, {std::move(a), std::move(b)}, span));
}
Expr Expr::proj(int index, Expr e, SourceSpan span) {
  assert(index == 1 || index == 2);
  auto n = node_of(ExprKind::Proj, {std::move(e)}, span);
  n.num = index;
  return make(std::move(n));
}
Expr Expr::inl(Expr e, SourceSpan span) { return make(node_of(ExprKind::Inl, {std::move(e)}, span)); }
Expr Expr::inr(Expr e, SourceSpan span) { return make(node_of(ExprKind::Inr, {std::move(e)}, span)); }
Expr Expr::match(Expr scrutinee, std::string x1, Expr b1, std::string x2, Expr b2, SourceSpan span) {
  auto n = node_of(ExprKind::Match, {std::move(scrutinee), std::move(b1), std::move(b2)}, span);
  n.name = std::move(x1);
  n.name2 = std::move(x2);
  return make(std::move(n));
}
Expr Expr::rec(std::string f, std::string x, Expr body, SourceSpan span) {
  auto n = node_of(ExprKind::Rec, {std::move(body)}, span);
  n.name = std::move(f);
  n.name2 = std::move(x);
  return make(std::move(n));
}
Expr Expr::lam(std::string x, Expr body, SourceSpan span) {
  return rec(std::string(kAnon), std::move(x), std::move(body), span);
}
Expr Expr::app(Expr fn, Expr arg, SourceSpan span) {
  return make(node_of(ExprKind::App, {std::move(fn), std::move(arg)}, span));
}
Expr Expr::let(std::string x, Expr bound, Expr body, SourceSpan span) {
  return app(lam(std::move(x), std::move(body), span), std::move(bound), span);
}
Expr Expr::seq(Expr first, Expr second, SourceSpan span) {
  return let(std::string(kAnon), std::move(first), std::move(second), span);
}
Expr Expr::tlam(Expr body, SourceSpan span) { return make(node_of(ExprKind::TLam, {std::move(body)}, span)); }
Expr Expr::tapp(Expr e, SourceSpan span) { return make(node_of(ExprKind::TApp, {std::move(e)}, span)); }
Expr Expr::pack(Expr e, SourceSpan span) { return make(node_of(ExprKind::Pack, {std::move(e)}, span)); }
Expr Expr::unpack(Expr e, std::string x, Expr body, SourceSpan span) {
  auto n = node_of(ExprKind::Unpack, {std::move(e), std::move(body)}, span);
  n.name = std::move(x);
  return make(std::move(n));
}
Expr Expr::fold(Expr e, SourceSpan span) { return make(node_of(ExprKind::Fold, {std::move(e)}, span)); }
Expr Expr::unfold(Expr e, SourceSpan span) { return make(node_of(ExprKind::Unfold, {std::move(e)}, span)); }
Expr Expr::if_(Expr c, Expr t, Expr e, SourceSpan span) {
  return make(node_of(ExprKind::If, {std::move(c), std::move(t), std::move(e)}, span));
}
Expr Expr::binop(BinOpKind op, Expr a, Expr b, SourceSpan span) {
  auto n = node_of(ExprKind::BinOp, {std::move(a), std::move(b)}, span);
  n.num = static_cast<std::int64_t>(op);
  return make(std::move(n));
}
Expr Expr::unop(UnOpKind op, Expr e, SourceSpan span) {
  auto n = node_of(ExprKind::UnOp, {std::move(e)}, span);
  n.num = static_cast<std::int64_t>(op);
  return make(std::move(n));
}
Expr Expr::ref(Expr e, SourceSpan span) { return make(node_of(ExprKind::Ref, {std::move(e)}, span)); }
Expr Expr::load(Expr e, SourceSpan span) { return make(node_of(ExprKind::Load, {std::move(e)}, span)); }
Expr Expr::store(Expr l, Expr v, SourceSpan span) {
  return make(node_of(ExprKind::Store, {std::move(l), std::move(v)}, span));
}
Expr Expr::cas(Expr l, Expr expected, Expr desired, SourceSpan span) {
  return make(node_of(ExprKind::Cas, {std::move(l), std::move(expected), std::move(desired)}, span));
}
Expr Expr::fork(Expr e, SourceSpan span) { return make(node_of(ExprKind::Fork, {std::move(e)}, span)); }
Expr Expr::new_proph(SourceSpan span) { return make(node_of(ExprKind::NewProph, {}, span)); }
Expr Expr::resolve(Expr p, Expr v, SourceSpan span) {
  return make(node_of(ExprKind::Resolve, {std::move(p), std::move(v)}, span));
}
Expr Expr::ascribe(Expr e, Type t, SourceSpan span) {
  auto n = node_of(ExprKind::Ascribe, {std::move(e)}, span);
  n.type = std::move(t);
  return make(std::move(n));
}
Expr Expr::hole(SourceSpan span) { return make(node_of(ExprKind::Hole, {}, span)); }

ExprKind Expr::kind() const { return node_->kind; }
std::size_t Expr::arity() const { return node_->kids.size(); }
const Expr &Expr::child(std::size_t i) const { return node_->kids[i]; }
std::span<const Expr> Expr::children() const { return node_->kids; }
const std::string &Expr::name() const { return node_->name; }
const std::string &Expr::name2() const { return node_->name2; }
bool Expr::bool_value() const { return node_->num != 0; }
std::int64_t Expr::int_value() const { return node_->num; }
std::size_t Expr::loc_id() const { return static_cast<std::size_t>(node_->num); }
std::size_t Expr::proph_id() const { return static_cast<std::size_t>(node_->num); }
int Expr::proj_index() const { return static_cast<int>(node_->num); }
BinOpKind Expr::binop_kind() const { return static_cast<BinOpKind>(node_->num); }
UnOpKind Expr::unop_kind() const { return static_cast<UnOpKind>(node_->num); }
const Type &Expr::type() const { return node_->type; }
const SourceSpan &Expr::span() const { return node_->span; }
bool Expr::is_value() const { return node_->value; }
bool Expr::has_runtime_ids() const { return node_->runtime; }
std::size_t Expr::hole_count() const { return node_->holes; }
const std::vector<std::string> &Expr::free_vars() const { return node_->free; }
std::uint64_t Expr::hash() const { return node_->hash; }

bool Expr::has_free_var(std::string_view x) const {
  const auto &f = node_->free;
  if (f.empty()) return false;
  auto it = std::lower_bound(f.begin(), f.end(), x);
  return it != f.end() && *it == x;
}

Expr Expr::with_children(std::vector<Expr> children) const {
  assert(children.size() == node_->kids.size());
  Node n;
  n.kind = node_->kind;
  n.num = node_->num;
  n.name = node_->name;
  n.name2 = node_->name2;
  n.type = node_->type;
  n.span = node_->span;
  n.kids = std::move(children);
  return make(std::move(n));
}

bool operator==(const Expr &a, const Expr &b) {
  if (a.node_ == b.node_) return true;
  const auto &x = *a.node_;
  const auto &y = *b.node_;
  if (x.hash != y.hash || x.kind != y.kind || x.num != y.num || x.kids.size() != y.kids.size() ||
      x.name != y.name || x.name2 != y.name2) {
    return false;
  }
  if (x.kind == ExprKind::Ascribe && x.type != y.type) return false;
  for (std::size_t i = 0; i < x.kids.size(); ++i) {
    if (x.kids[i] != y.kids[i]) return false;
  }
  return true;
}

Val::Val(Expr e) : expr_(std::move(e)) {
  if (!expr_.is_value() || !expr_.is_closed()) {
    throw std::invalid_argument("not a closed value");
  }
}

namespace {

// Rebuilds `e` with `f` applied to each child; returns `e` itself when no
// child changed.
template <typename F>
Expr map_children(const Expr &e, F &&f) {
  std::vector<Expr> kids;
  bool changed = false;
  kids.reserve(e.arity());
  for (std::size_t i = 0; i < e.arity(); ++i) {
    kids.push_back(f(i, e.child(i)));
    changed = changed || !kids.back().same_node(e.child(i));
  }
  return changed ? e.with_children(std::move(kids)) : e;
}

}  // namespace

Expr subst(const Expr &e, std::string_view x, const Val &v) {
  if (!e.has_free_var(x)) return e;
  switch (e.kind()) {
    case ExprKind::Var:
      return v.expr();
    case ExprKind::Rec:
      // has_free_var already excludes the case where x is bound here.
      return map_children(e, [&](std::size_t, const Expr &c) { return subst(c, x, v); });
    case ExprKind::Match:
      return map_children(e, [&](std::size_t i, const Expr &c) {
        if ((i == 1 && e.name() == x) || (i == 2 && e.name2() == x)) return c;
        return subst(c, x, v);
      });
    case ExprKind::Unpack:
      return map_children(e, [&](std::size_t i, const Expr &c) {
        if (i == 1 && e.name() == x) return c;
        return subst(c, x, v);
      });
    default:
      return map_children(e, [&](std::size_t, const Expr &c) { return subst(c, x, v); });
  }
}

Expr erase_ascriptions(const Expr &e) {
  if (e.kind() == ExprKind::Ascribe) return erase_ascriptions(e.child(0));
  return map_children(e, [](std::size_t, const Expr &c) { return erase_ascriptions(c); });
}

Expr plug(const Expr &context, const Expr &e) {
  if (context.hole_count() == 0) return context;
  if (context.kind() == ExprKind::Hole) return e;
  bool done = false;
  return map_children(context, [&](std::size_t, const Expr &c) {
    if (done || c.hole_count() == 0) return c;
    done = true;
    return plug(c, e);
  });
}

Frame make_frame(const Expr &node, std::size_t slot) {
  FrameKind kind = FrameKind::Ascribe;
  switch (node.kind()) {
    case ExprKind::App:
      kind = slot == 1 ? FrameKind::AppArg : FrameKind::AppFun;
      break;
    case ExprKind::Pair:
      kind = slot == 0 ? FrameKind::PairL : FrameKind::PairR;
      break;
    case ExprKind::Proj:
      kind = FrameKind::Proj;
      break;
    case ExprKind::Inl:
      kind = FrameKind::Inl;
      break;
    case ExprKind::Inr:
      kind = FrameKind::Inr;
      break;
    case ExprKind::Match:
      kind = FrameKind::Match;
      break;
    case ExprKind::If:
      kind = FrameKind::If;
      break;
    case ExprKind::TApp:
      kind = FrameKind::TApp;
      break;
    case ExprKind::Pack:
      kind = FrameKind::Pack;
      break;
    case ExprKind::Unpack:
      kind = FrameKind::Unpack;
      break;
    case ExprKind::Fold:
      kind = FrameKind::Fold;
      break;
    case ExprKind::Unfold:
      kind = FrameKind::Unfold;
      break;
    case ExprKind::BinOp:
      kind = slot == 0 ? FrameKind::BinOpL : FrameKind::BinOpR;
      break;
    case ExprKind::UnOp:
      kind = FrameKind::UnOp;
      break;
    case ExprKind::Ref:
      kind = FrameKind::Ref;
      break;
    case ExprKind::Load:
      kind = FrameKind::Load;
      break;
    case ExprKind::Store:
      kind = slot == 1 ? FrameKind::StoreVal : FrameKind::StoreLoc;
      break;
    case ExprKind::Cas:
      kind = slot == 0 ? FrameKind::CasL : slot == 1 ? FrameKind::CasM : FrameKind::CasR;
      break;
    case ExprKind::Resolve:
      kind = slot == 0 ? FrameKind::ResolveL : FrameKind::ResolveR;
      break;
    case ExprKind::Ascribe:
      kind = FrameKind::Ascribe;
      break;
    default:
      throw std::invalid_argument("expression kind has no evaluation frame");
  }
  return Frame{kind, node, slot};
}

Expr fill(const EvalCtx &ctx, const Expr &e) {
  Expr out = e;
  for (auto it = ctx.rbegin(); it != ctx.rend(); ++it) {
    std::vector<Expr> kids(it->node.children().begin(), it->node.children().end());
    kids[it->slot] = std::move(out);
    out = it->node.with_children(std::move(kids));
  }
  return out;
}

}  // namespace reloc
