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

#include "reloc/semantics.hpp"

#include <fmt/format.h>

namespace reloc {

const char *to_string(RuleTag tag) {
  switch (tag) {
    case RuleTag::Pure:
      return "Pure";
    case RuleTag::Alloc:
      return "Alloc";
    case RuleTag::Load:
      return "Load";
    case RuleTag::Store:
      return "Store";
    case RuleTag::CasFail:
      return "CasFail";
    case RuleTag::CasSuc:
      return "CasSuc";
    case RuleTag::Fork:
      return "Fork";
    case RuleTag::NewProph:
      return "NewProph";
    case RuleTag::Resolve:
      return "Resolve";
  }
  return "?";
}

Config init_config(const Expr &e) {
  Config cfg;
  cfg.threads.push_back(erase_ascriptions(e));
  return cfg;
}

namespace {

// Child evaluation order per node kind. Children outside the list are not
// evaluated before the node itself reduces.
std::pair<const std::size_t *, std::size_t> eval_order(const Expr &e) {
  static constexpr std::size_t kFirst[] = {0};
  static constexpr std::size_t kLeftRight[] = {0, 1};
  static constexpr std::size_t kRightLeft[] = {1, 0};
  static constexpr std::size_t kThree[] = {0, 1, 2};
  switch (e.kind()) {
    case ExprKind::App:
    case ExprKind::Store:
      return {kRightLeft, 2};
    case ExprKind::Pair:
    case ExprKind::BinOp:
    case ExprKind::Resolve:
      return {kLeftRight, 2};
    case ExprKind::Cas:
      return {kThree, 3};
    case ExprKind::Proj:
    case ExprKind::Inl:
    case ExprKind::Inr:
    case ExprKind::Match:
    case ExprKind::If:
    case ExprKind::TApp:
    case ExprKind::Pack:
    case ExprKind::Unpack:
    case ExprKind::Fold:
    case ExprKind::Unfold:
    case ExprKind::UnOp:
    case ExprKind::Ref:
    case ExprKind::Load:
    case ExprKind::Ascribe:
      return {kFirst, 1};
    default:
      return {nullptr, 0};
  }
}

bool is_eq_value(const Expr &v) {
  switch (v.kind()) {
    case ExprKind::Inl:
    case ExprKind::Inr: {
      const ExprKind k = v.child(0).kind();
      return k == ExprKind::Unit || k == ExprKind::Bool || k == ExprKind::Int || k == ExprKind::Loc;
    }
    case ExprKind::Unit:
    case ExprKind::Bool:
    case ExprKind::Int:
    case ExprKind::Loc:
      return true;
    default:
      return false;
  }
}

std::int64_t wrap(std::uint64_t x) { return static_cast<std::int64_t>(x); }

std::optional<Expr> binop_step(const Expr &e) {
  const Expr &a = e.child(0);
  const Expr &b = e.child(1);
  switch (e.binop_kind()) {
    case BinOpKind::Add:
    case BinOpKind::Sub:
    case BinOpKind::Mul:
    case BinOpKind::Lt: {
      if (a.kind() != ExprKind::Int || b.kind() != ExprKind::Int) return std::nullopt;
      const auto x = static_cast<std::uint64_t>(a.int_value());
      const auto y = static_cast<std::uint64_t>(b.int_value());
      switch (e.binop_kind()) {
        case BinOpKind::Add:
          return Expr::integer(wrap(x + y));
        case BinOpKind::Sub:
          return Expr::integer(wrap(x - y));
        case BinOpKind::Mul:
          return Expr::integer(wrap(x * y));
        default:
          return Expr::boolean(a.int_value() < b.int_value());
      }
    }
    case BinOpKind::And:
      if (a.kind() != ExprKind::Bool || b.kind() != ExprKind::Bool) return std::nullopt;
      return Expr::boolean(a.bool_value() && b.bool_value());
    case BinOpKind::Eq:
      if (!is_eq_value(a) || !is_eq_value(b)) return std::nullopt;
      return Expr::boolean(a == b);
  }
  return std::nullopt;
}

Expr subst_named(const Expr &body, const std::string &x, const Expr &v) {
  if (x == kAnon) return body;
  return subst(body, x, Val(v));
}

}  // namespace

std::optional<Decomposition> decompose(const Expr &root) {
  if (root.is_value()) return std::nullopt;
  Decomposition d{{}, root};
  for (;;) {
    const Expr &e = d.redex;
    auto [order, n] = eval_order(e);
    std::size_t next = n;
    for (std::size_t k = 0; k < n; ++k) {
      if (!e.child(order[k]).is_value()) {
        next = order[k];
        break;
      }
    }
    if (next == n) return d;
    d.ctx.push_back(make_frame(e, next));
    Expr sub = e.child(next);
    d.redex = std::move(sub);
  }
}

std::optional<Expr> pure_step(const Expr &e) {
  switch (e.kind()) {
    case ExprKind::App: {
      const Expr &fn = e.child(0);
      if (fn.kind() != ExprKind::Rec || !e.child(1).is_value()) return std::nullopt;
      Expr body = subst_named(fn.child(0), fn.name2(), e.child(1));
      if (fn.name() != fn.name2()) body = subst_named(body, fn.name(), fn);
      return body;
    }
    case ExprKind::Proj: {
      const Expr &p = e.child(0);
      if (p.kind() != ExprKind::Pair || !p.is_value()) return std::nullopt;
      return p.child(e.proj_index() == 1 ? 0 : 1);
    }
    case ExprKind::Match: {
      const Expr &s = e.child(0);
      if (!s.is_value()) return std::nullopt;
      if (s.kind() == ExprKind::Inl) return subst_named(e.child(1), e.name(), s.child(0));
      if (s.kind() == ExprKind::Inr) return subst_named(e.child(2), e.name2(), s.child(0));
      return std::nullopt;
    }
    case ExprKind::TApp:
      if (e.child(0).kind() != ExprKind::TLam) return std::nullopt;
      return e.child(0).child(0);
    case ExprKind::Unpack: {
      const Expr &p = e.child(0);
      if (p.kind() != ExprKind::Pack || !p.is_value()) return std::nullopt;
      return subst_named(e.child(1), e.name(), p.child(0));
    }
    case ExprKind::Unfold: {
      const Expr &f = e.child(0);
      if (f.kind() != ExprKind::Fold || !f.is_value()) return std::nullopt;
      return f.child(0);
    }
    case ExprKind::If: {
      const Expr &c = e.child(0);
      if (c.kind() != ExprKind::Bool) return std::nullopt;
      return e.child(c.bool_value() ? 1 : 2);
    }
    case ExprKind::BinOp:
      if (!e.child(0).is_value() || !e.child(1).is_value()) return std::nullopt;
      return binop_step(e);
    case ExprKind::UnOp:
      if (e.child(0).kind() != ExprKind::Bool) return std::nullopt;
      return Expr::boolean(!e.child(0).bool_value());
    case ExprKind::Ascribe:
      if (!e.child(0).is_value()) return std::nullopt;
      return e.child(0);
    default:
      return std::nullopt;
  }
}

std::optional<HeadStep> head_step(const Expr &e, Heap &heap, std::size_t &next_proph) {
  if (auto r = pure_step(e)) return HeadStep{std::move(*r), RuleTag::Pure, std::nullopt};
  switch (e.kind()) {
    case ExprKind::Ref: {
      if (!e.child(0).is_value()) return std::nullopt;
      const std::size_t loc = heap.next_fresh();
      heap.cells.emplace_back(e.child(0));
      return HeadStep{Expr::loc(loc), RuleTag::Alloc, std::nullopt};
    }
    case ExprKind::Load: {
      const Expr &l = e.child(0);
      if (l.kind() != ExprKind::Loc || !heap.contains(l.loc_id())) return std::nullopt;
      return HeadStep{heap.at(l.loc_id()).expr(), RuleTag::Load, std::nullopt};
    }
    case ExprKind::Store: {
      const Expr &l = e.child(0);
      if (l.kind() != ExprKind::Loc || !heap.contains(l.loc_id()) || !e.child(1).is_value()) {
        return std::nullopt;
      }
      heap.cells[l.loc_id()] = Val(e.child(1));
      return HeadStep{Expr::unit(), RuleTag::Store, std::nullopt};
    }
    case ExprKind::Cas: {
      const Expr &l = e.child(0);
      if (l.kind() != ExprKind::Loc || !heap.contains(l.loc_id()) || !e.child(1).is_value() ||
          !e.child(2).is_value()) {
        return std::nullopt;
      }
      if (heap.at(l.loc_id()).expr() == e.child(1)) {
        heap.cells[l.loc_id()] = Val(e.child(2));
        return HeadStep{Expr::boolean(true), RuleTag::CasSuc, std::nullopt};
      }
      return HeadStep{Expr::boolean(false), RuleTag::CasFail, std::nullopt};
    }
    case ExprKind::Fork:
      return HeadStep{Expr::unit(), RuleTag::Fork, e.child(0)};
    case ExprKind::NewProph:
      return HeadStep{Expr::proph(next_proph++), RuleTag::NewProph, std::nullopt};
    case ExprKind::Resolve:
      if (e.child(0).kind() != ExprKind::Proph || !e.child(1).is_value()) return std::nullopt;
      return HeadStep{Expr::unit(), RuleTag::Resolve, std::nullopt};
    default:
      return std::nullopt;
  }
}

ThreadStep thread_step(const Config &cfg, std::size_t i) {
  const Expr &t = cfg.threads.at(i);
  auto d = decompose(t);
  if (!d) return ThreadStep{ThreadStatus::IsValue, std::nullopt, std::nullopt};
  StepResult out{cfg, i, RuleTag::Pure};
  auto h = head_step(d->redex, out.config.heap, out.config.next_proph);
  if (!h) return ThreadStep{ThreadStatus::Stuck, std::nullopt, d->redex};
  out.tag = h->tag;
  out.config.threads[i] = fill(d->ctx, h->result);
  if (h->forked) out.config.threads.push_back(std::move(*h->forked));
  return ThreadStep{ThreadStatus::Stepped, std::move(out), std::nullopt};
}

std::vector<std::size_t> enabled_threads(const Config &cfg) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cfg.threads.size(); ++i) {
    if (thread_step(cfg, i).status == ThreadStatus::Stepped) out.push_back(i);
  }
  return out;
}

Config replay(const Expr &e, const Trace &trace) {
  Config cfg = init_config(e);
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const TraceStep &s = trace[k];
    if (s.thread >= cfg.threads.size()) {
      throw ReplayError(fmt::format("step {}: thread {} does not exist", k, s.thread));
    }
    ThreadStep r = thread_step(cfg, s.thread);
    if (r.status != ThreadStatus::Stepped) {
      throw ReplayError(fmt::format("step {}: thread {} cannot step", k, s.thread));
    }
    if (r.step->tag != s.tag) {
      throw ReplayError(fmt::format("step {}: expected rule {}, got {}", k, to_string(s.tag),
                                    to_string(r.step->tag)));
    }
    cfg = std::move(r.step->config);
  }
  return cfg;
}

}  // namespace reloc
