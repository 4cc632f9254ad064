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

#include "reloc/refine.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

#include "reloc/parser.hpp"
#include "reloc/typecheck.hpp"

namespace reloc {

bool Rel::contains(const Val &a, const Val &b) const {
  return std::any_of(pairs.begin(), pairs.end(), [&](const auto &p) { return p.first == a && p.second == b; });
}

const Rel *RelEnv::lookup(std::size_t i) const {
  if (i >= stack_.size()) return nullptr;
  return &stack_[stack_.size() - 1 - i];
}

RelEnv RelEnv::push(Rel r) const {
  RelEnv out = *this;
  out.stack_.push_back(std::move(r));
  return out;
}

const char *to_string(Relatedness r) {
  switch (r) {
    case Relatedness::Related:
      return "Related";
    case Relatedness::NotRelated:
      return "NotRelated";
    case Relatedness::Deferred:
      return "Deferred";
    case Relatedness::DepthExhausted:
      return "DepthExhausted";
  }
  return "?";
}

const char *to_string(Verdict::Tag tag) {
  switch (tag) {
    case Verdict::Tag::NoCounterexample:
      return "NoCounterexample";
    case Verdict::Tag::Counterexample:
      return "Counterexample";
    case Verdict::Tag::Inconclusive:
      return "Inconclusive";
  }
  return "?";
}

namespace {

Relatedness meet(Relatedness a, Relatedness b) {
  if (a == Relatedness::NotRelated || b == Relatedness::NotRelated) return Relatedness::NotRelated;
  if (a == Relatedness::DepthExhausted || b == Relatedness::DepthExhausted) return Relatedness::DepthExhausted;
  if (a == Relatedness::Deferred || b == Relatedness::Deferred) return Relatedness::Deferred;
  return Relatedness::Related;
}

Relatedness of(bool b) { return b ? Relatedness::Related : Relatedness::NotRelated; }

}  // namespace

Relatedness relate_values(const Type &t, const RelEnv &delta, const Val &v1, const Val &v2, const Heap &h1,
                          const Heap &h2, std::size_t depth) {
  if (depth == 0) return Relatedness::DepthExhausted;
  const Expr &a = v1.expr();
  const Expr &b = v2.expr();
  switch (t.kind()) {
    case TypeKind::Unit:
      return of(a.kind() == ExprKind::Unit && b.kind() == ExprKind::Unit);
    case TypeKind::Bool:
      return of(a.kind() == ExprKind::Bool && b.kind() == ExprKind::Bool && a.bool_value() == b.bool_value());
    case TypeKind::Int:
      return of(a.kind() == ExprKind::Int && b.kind() == ExprKind::Int && a.int_value() == b.int_value());
    case TypeKind::Var: {
      const Rel *r = delta.lookup(t.index());
      if (r != nullptr && r->opaque) return Relatedness::Related;
      return of(r != nullptr && r->contains(v1, v2));
    }
    case TypeKind::Prod: {
      if (a.kind() != ExprKind::Pair || b.kind() != ExprKind::Pair) return Relatedness::NotRelated;
      Relatedness l = relate_values(t.lhs(), delta, Val(a.child(0)), Val(b.child(0)), h1, h2, depth);
      if (l == Relatedness::NotRelated) return l;
      return meet(l, relate_values(t.rhs(), delta, Val(a.child(1)), Val(b.child(1)), h1, h2, depth));
    }
    case TypeKind::Sum: {
      if (a.kind() == ExprKind::Inl && b.kind() == ExprKind::Inl) {
        return relate_values(t.lhs(), delta, Val(a.child(0)), Val(b.child(0)), h1, h2, depth);
      }
      if (a.kind() == ExprKind::Inr && b.kind() == ExprKind::Inr) {
        return relate_values(t.rhs(), delta, Val(a.child(0)), Val(b.child(0)), h1, h2, depth);
      }
      return Relatedness::NotRelated;
    }
    case TypeKind::Rec:
      if (a.kind() != ExprKind::Fold || b.kind() != ExprKind::Fold) return Relatedness::NotRelated;
      return relate_values(type_subst(t.body(), t), delta, Val(a.child(0)), Val(b.child(0)), h1, h2, depth - 1);
    case TypeKind::Ref:
      if (a.kind() != ExprKind::Loc || b.kind() != ExprKind::Loc) return Relatedness::NotRelated;
      if (!h1.contains(a.loc_id()) || !h2.contains(b.loc_id())) return Relatedness::NotRelated;
      return relate_values(t.body(), delta, h1.at(a.loc_id()), h2.at(b.loc_id()), h1, h2, depth - 1);
    case TypeKind::Proph:
      return of(a.kind() == ExprKind::Proph && b.kind() == ExprKind::Proph);
    case TypeKind::Arrow:
    case TypeKind::Forall:
    case TypeKind::Exists:
      return Relatedness::Deferred;
    default:
      return Relatedness::NotRelated;
  }
}

namespace {

constexpr std::size_t kArgMuFuel = 2;

ArgPairs gen_args(const Type &t, const RelEnv &delta, std::size_t budget, std::size_t mu_fuel) {
  ArgPairs out;
  auto diag = [&](Expr e) { out.pairs.emplace_back(e, e); };
  switch (t.kind()) {
    case TypeKind::Unit:
      diag(Expr::unit());
      break;
    case TypeKind::Bool:
      diag(Expr::boolean(true));
      diag(Expr::boolean(false));
      break;
    case TypeKind::Int:
      for (std::int64_t n : {0, 1, -1, 2, -2}) diag(Expr::integer(n));
      out.exhaustive = false;
      break;
    case TypeKind::Var: {
      const Rel *r = delta.lookup(t.index());
      if (r == nullptr || r->opaque) {
        out.exhaustive = false;
        break;
      }
      for (const auto &[x, y] : r->pairs) out.pairs.emplace_back(x.expr(), y.expr());
      break;
    }
    case TypeKind::Prod: {
      ArgPairs l = gen_args(t.lhs(), delta, budget, mu_fuel);
      ArgPairs r = gen_args(t.rhs(), delta, budget, mu_fuel);
      out.exhaustive = l.exhaustive && r.exhaustive;
      for (const auto &p : l.pairs) {
        for (const auto &q : r.pairs) {
          out.pairs.emplace_back(Expr::pair(p.first, q.first), Expr::pair(p.second, q.second));
        }
      }
      break;
    }
    case TypeKind::Sum: {
      ArgPairs l = gen_args(t.lhs(), delta, budget, mu_fuel);
      ArgPairs r = gen_args(t.rhs(), delta, budget, mu_fuel);
      out.exhaustive = l.exhaustive && r.exhaustive;
      for (const auto &p : l.pairs) out.pairs.emplace_back(Expr::inl(p.first), Expr::inl(p.second));
      for (const auto &q : r.pairs) out.pairs.emplace_back(Expr::inr(q.first), Expr::inr(q.second));
      break;
    }
    case TypeKind::Rec: {
      out.exhaustive = false;
      if (mu_fuel == 0) break;
      ArgPairs u = gen_args(type_subst(t.body(), t), delta, budget, mu_fuel - 1);
      for (const auto &p : u.pairs) out.pairs.emplace_back(Expr::fold(p.first), Expr::fold(p.second));
      break;
    }
    case TypeKind::Ref: {
      ArgPairs u = gen_args(t.body(), delta, budget, mu_fuel);
      for (const auto &p : u.pairs) out.pairs.emplace_back(Expr::ref(p.first), Expr::ref(p.second));
      out.exhaustive = false;  // aliasing between arguments is not explored
      break;
    }
    default:
      out.exhaustive = false;
      break;
  }
  if (out.pairs.size() > budget) {
    out.pairs.resize(budget);
    out.exhaustive = false;
  }
  return out;
}

}  // namespace

ArgPairs gen_related_args(const Type &t, const RelEnv &delta, std::size_t budget) {
  return gen_args(t, delta, budget, kArgMuFuel);
}

std::vector<Rel> CheckBounds::default_forall_candidates() {
  Rel empty{"empty", {}};
  Rel ident{"id_int", {}};
  for (std::int64_t n : {0, 1, -1, 2, -2}) {
    ident.pairs.emplace_back(Val(Expr::integer(n)), Val(Expr::integer(n)));
  }
  Rel bit{"bool_int", {}};
  bit.pairs.emplace_back(Val(Expr::boolean(true)), Val(Expr::integer(1)));
  bit.pairs.emplace_back(Val(Expr::boolean(false)), Val(Expr::integer(0)));
  return {empty, ident, bit};
}

std::size_t workers_from_env() {
  const char *s = std::getenv("RELOC_WORKERS");
  if (s == nullptr) return 1;
  char *end = nullptr;
  long n = std::strtol(s, &end, 10);
  if (end == s || n < 1) return 1;
  return static_cast<std::size_t>(std::min<long>(n, 256));
}

namespace {

// ---------------------------------------------------------------------------
// Client programs ("drivers"). A driver binds the module, calls its
// operations and returns every first-order result in one tuple. Left and
// right drivers share all structure except the module and the arguments.

struct Observation {
  Expr expr;
  Type type;
  RelEnv delta;
};

struct Handle {
  enum class Kind : std::uint8_t { Call, TApp } kind;
  Expr expr;
  Type type;
  RelEnv delta;
  ArgPairs args;  // Call
  std::string name;
  std::optional<std::string> opaque_domain;  // Call on a value of an opaque type
};

struct OpaqueValue {
  Expr expr;
  std::string rel;
};

struct Binding {
  enum class Kind : std::uint8_t { Let, Unpack, Seq } kind;
  std::string var;
  Expr left;
  Expr right;
};

struct DriverState {
  std::vector<Binding> bindings;
  std::vector<Handle> handles;
  std::vector<Observation> obs;
  std::vector<OpaqueValue> opaque_values;
  std::size_t calls = 0;
  std::size_t fresh = 0;
  std::size_t existentials = 0;
  bool exhaustive = true;
  bool missing_witness = false;
  std::vector<std::string> steps;
};

struct Driver {
  Expr left;
  Expr right;
  std::vector<Observation> obs;
  std::string description;
  bool exhaustive = true;
  bool missing_witness = false;
};

struct SingleOp {
  std::size_t handle;
  std::size_t choice;  // argument pair or candidate relation
};

class DriverBuilder {
 public:
  DriverBuilder(const Expr &e1, const Expr &e2, const Type &t, const RelEnv &delta, const CheckBounds &b)
      : bounds_(b) {
    DriverState s;
    s.bindings.push_back(Binding{Binding::Kind::Let, "m", e1, e2});
    expand(s, Expr::var("m"), t, delta, b.mu_depth, "m");
    enumerate(s);
  }

  std::vector<Driver> drivers;
  bool truncated = false;

 private:
  static constexpr std::size_t kMaxDrivers = 50000;

  std::string fresh(DriverState &s, const char *prefix) { return fmt::format("{}{}", prefix, s.fresh++); }

  void expand(DriverState &s, const Expr &e, const Type &t, const RelEnv &delta, std::size_t mu_fuel,
              const std::string &name) {
    if (t.kind() == TypeKind::Var) {
      const Rel *r = delta.lookup(t.index());
      if (r != nullptr && r->opaque) {
        s.opaque_values.push_back(OpaqueValue{e, r->name});
        return;
      }
    }
    if (is_first_order(t)) {
      s.obs.push_back(Observation{e, t, delta});
      return;
    }
    switch (t.kind()) {
      case TypeKind::Prod:
        expand(s, Expr::proj(1, e), t.lhs(), delta, mu_fuel, "π1 " + name);
        expand(s, Expr::proj(2, e), t.rhs(), delta, mu_fuel, "π2 " + name);
        return;
      case TypeKind::Arrow: {
        if (t.lhs().kind() == TypeKind::Var) {
          const Rel *r = delta.lookup(t.lhs().index());
          if (r != nullptr && r->opaque) {
            s.exhaustive = false;
            s.handles.push_back(Handle{Handle::Kind::Call, e, t, delta, {}, name, r->name});
            return;
          }
        }
        ArgPairs args = gen_related_args(t.lhs(), delta, bounds_.arg_budget);
        if (!args.exhaustive) s.exhaustive = false;
        // Allocating arguments are bound once so that every call shares them.
        for (auto &[a1, a2] : args.pairs) {
          if (a1.is_value() && a2.is_value()) continue;
          std::string x = fresh(s, "a");
          s.bindings.push_back(Binding{Binding::Kind::Let, x, a1, a2});
          s.steps.push_back(fmt::format("{} = {}", x, a1 == a2 ? pretty(a1) : pretty(a1) + " | " + pretty(a2)));
          a1 = Expr::var(x);
          a2 = a1;
        }
        s.handles.push_back(Handle{Handle::Kind::Call, e, t, delta, std::move(args), name, std::nullopt});
        return;
      }
      case TypeKind::Forall:
        s.exhaustive = false;  // candidate relations are samples
        s.handles.push_back(Handle{Handle::Kind::TApp, e, t, delta, {}, name, std::nullopt});
        return;
      case TypeKind::Exists: {
        if (bounds_.witnesses.empty()) {
          s.missing_witness = true;
          return;
        }
        Rel w = bounds_.witnesses[std::min(s.existentials, bounds_.witnesses.size() - 1)];
        if (w.opaque) w.name = fmt::format("{}#{}", w.name, s.existentials);
        ++s.existentials;
        std::string x = fresh(s, "u");
        s.bindings.push_back(Binding{Binding::Kind::Unpack, x, e, e});
        s.steps.push_back(fmt::format("unpack {} as {} with {}", name, x, w.name));
        expand(s, Expr::var(x), t.body(), delta.push(w), mu_fuel, x);
        return;
      }
      case TypeKind::Rec:
        if (mu_fuel == 0) {
          s.exhaustive = false;
          return;
        }
        expand(s, Expr::unfold(e), type_subst(t.body(), t), delta, mu_fuel - 1, "unfold " + name);
        return;
      default:
        // Higher-order payloads under sums or references are not exercised.
        s.exhaustive = false;
        return;
    }
  }

  std::vector<SingleOp> single_ops(const DriverState &s) const {
    std::vector<SingleOp> ops;
    for (std::size_t h = 0; h < s.handles.size(); ++h) {
      const Handle &hd = s.handles[h];
      if (hd.opaque_domain) {
        for (std::size_t c = 0; c < s.opaque_values.size(); ++c) {
          if (s.opaque_values[c].rel == *hd.opaque_domain) ops.push_back(SingleOp{h, c});
        }
        continue;
      }
      const std::size_t n =
          hd.kind == Handle::Kind::Call ? hd.args.pairs.size() : bounds_.forall_candidates.size();
      for (std::size_t c = 0; c < n; ++c) ops.push_back(SingleOp{h, c});
    }
    return ops;
  }

  // Left and right call expressions plus the result type and Δ.
  struct CallExprs {
    Expr left;
    Expr right;
    Type result;
    RelEnv delta;
    std::string text;
  };

  CallExprs call_exprs(const DriverState &s, const SingleOp &op) const {
    const Handle &h = s.handles[op.handle];
    if (h.opaque_domain) {
      const Expr &a = s.opaque_values[op.choice].expr;
      return CallExprs{Expr::app(h.expr, a), Expr::app(h.expr, a), h.type.rhs(), h.delta,
                       fmt::format("({}) {}", h.name, pretty(a))};
    }
    if (h.kind == Handle::Kind::Call) {
      const auto &[a1, a2] = h.args.pairs[op.choice];
      std::string text = a1 == a2 ? fmt::format("({}) {}", h.name, pretty(a1))
                                  : fmt::format("({}) [{} | {}]", h.name, pretty(a1), pretty(a2));
      return CallExprs{Expr::app(h.expr, a1), Expr::app(h.expr, a2), h.type.rhs(), h.delta, std::move(text)};
    }
    const Rel &r = bounds_.forall_candidates[op.choice];
    return CallExprs{Expr::tapp(h.expr), Expr::tapp(h.expr), h.type.body(), h.delta.push(r),
                     fmt::format("({}) <> with {}", h.name, r.name)};
  }

  void emit(const DriverState &s) {
    if (drivers.size() >= kMaxDrivers) {
      truncated = true;
      return;
    }
    Driver d;
    Expr tuple_l = Expr::unit();
    for (auto it = s.obs.rbegin(); it != s.obs.rend(); ++it) tuple_l = Expr::pair(it->expr, tuple_l);
    Expr left = tuple_l;
    Expr right = tuple_l;
    for (auto it = s.bindings.rbegin(); it != s.bindings.rend(); ++it) {
      switch (it->kind) {
        case Binding::Kind::Let:
          left = Expr::let(it->var, it->left, left);
          right = Expr::let(it->var, it->right, right);
          break;
        case Binding::Kind::Unpack:
          left = Expr::unpack(it->left, it->var, left);
          right = Expr::unpack(it->right, it->var, right);
          break;
        case Binding::Kind::Seq:
          left = Expr::seq(it->left, left);
          right = Expr::seq(it->right, right);
          break;
      }
    }
    d.left = std::move(left);
    d.right = std::move(right);
    d.obs = s.obs;
    d.exhaustive = s.exhaustive;
    d.missing_witness = s.missing_witness;
    d.description = s.steps.empty() ? "observe the module" : fmt::format("{}", fmt::join(s.steps, "; "));
    drivers.push_back(std::move(d));
  }

  void enumerate(const DriverState &s) {
    emit(s);
    if (truncated || s.calls >= bounds_.arg_budget) return;
    const std::vector<SingleOp> ops = single_ops(s);
    for (const SingleOp &op : ops) {
      DriverState next = s;
      CallExprs c = call_exprs(s, op);
      std::string r = fresh(next, "r");
      next.bindings.push_back(Binding{Binding::Kind::Let, r, c.left, c.right});
      next.steps.push_back(fmt::format("{} = {}", r, c.text));
      ++next.calls;
      expand(next, Expr::var(r), c.result, c.delta, bounds_.mu_depth, r);
      enumerate(next);
      if (truncated) return;
    }
    if (!bounds_.concurrent_calls || s.calls + 2 > bounds_.arg_budget) return;
    for (std::size_t i = 0; i < ops.size(); ++i) {
      for (std::size_t j = i; j < ops.size(); ++j) {
        DriverState next = s;
        CallExprs a = call_exprs(s, ops[i]);
        CallExprs b = call_exprs(s, ops[j]);
        std::string ch = fresh(next, "ch");
        std::string ra = fresh(next, "r");
        std::string rb = fresh(next, "r");
        auto forked = [&](const Expr &call) {
          return Expr::fork(Expr::store(Expr::var(ch), Expr::inr(call)));
        };
        // Spin until the forked call has published its result.
        Expr join = Expr::app(
            Expr::rec("w", "z",
                      Expr::match(Expr::load(Expr::var(ch)), "y", Expr::app(Expr::var("w"), Expr::unit()), "v",
                                  Expr::var("v"))),
            Expr::unit());
        next.bindings.push_back(Binding{Binding::Kind::Let, ch, Expr::ref(Expr::inl(Expr::unit())),
                                        Expr::ref(Expr::inl(Expr::unit()))});
        next.bindings.push_back(Binding{Binding::Kind::Seq, "", forked(a.left), forked(a.right)});
        next.bindings.push_back(Binding{Binding::Kind::Let, rb, b.left, b.right});
        next.bindings.push_back(Binding{Binding::Kind::Let, ra, join, join});
        next.steps.push_back(fmt::format("{} = {} || {} = {}", ra, a.text, rb, b.text));
        next.calls += 2;
        expand(next, Expr::var(ra), a.result, a.delta, bounds_.mu_depth, ra);
        expand(next, Expr::var(rb), b.result, b.delta, bounds_.mu_depth, rb);
        enumerate(next);
        if (truncated) return;
      }
    }
  }

  const CheckBounds &bounds_;
};

std::vector<Val> decode_tuple(const Val &v, std::size_t n) {
  std::vector<Val> out;
  Expr cur = v.expr();
  for (std::size_t i = 0; i < n && cur.kind() == ExprKind::Pair; ++i) {
    out.emplace_back(cur.child(0));
    cur = cur.child(1);
  }
  return out;
}

struct DriverResult {
  Verdict::Tag tag = Verdict::Tag::NoCounterexample;
  bool complete = true;
  bool stuck = false;
  std::optional<Outcome> left_outcome;
  std::optional<StuckThread> left_stuck;
  std::vector<Val> right_values;
  bool right_complete = true;
  std::size_t states = 0;
  BoundHit bound_hit = BoundHit::None;
  std::string message;
};

constexpr std::size_t kMaxReportedRightValues = 16;

void note_bound(BoundHit &dst, BoundHit b) {
  if (dst == BoundHit::None) dst = b;
}

DriverResult check_driver(const Driver &d, const CheckBounds &b) {
  DriverResult res;
  if (d.missing_witness) {
    res.tag = Verdict::Tag::Inconclusive;
    res.complete = false;
    res.message = "existential type without a witness relation";
    return res;
  }
  ExploreReport left = explore_all(d.left, b.left);
  res.states += left.states_visited;
  note_bound(res.bound_hit, left.bound_hit);
  if (!left.stuck.empty()) {
    res.tag = Verdict::Tag::Counterexample;
    res.stuck = true;
    res.left_stuck = left.stuck.front();
    res.message = fmt::format("left program gets stuck at `{}`", pretty(left.stuck.front().redex));
    return res;
  }
  ExploreReport right = explore_all(d.right, b.right);
  res.states += right.states_visited;
  note_bound(res.bound_hit, right.bound_hit);
  res.right_complete = right.complete;
  bool depth_exhausted = false;
  const std::size_t n = d.obs.size();
  for (const Outcome &lo : left.outcomes) {
    std::vector<Val> lv = decode_tuple(lo.value, n);
    bool matched = false;
    for (const Outcome &ro : right.outcomes) {
      std::vector<Val> rv = decode_tuple(ro.value, n);
      if (lv.size() != n || rv.size() != n) continue;
      Relatedness all = Relatedness::Related;
      for (std::size_t i = 0; i < n && all != Relatedness::NotRelated; ++i) {
        all = meet(all, relate_values(d.obs[i].type, d.obs[i].delta, lv[i], rv[i], lo.heap, ro.heap,
                                      b.mu_depth));
      }
      if (all == Relatedness::Related) {
        matched = true;
        break;
      }
      if (all == Relatedness::DepthExhausted) depth_exhausted = true;
    }
    if (matched) continue;
    res.left_outcome = lo;
    for (const Outcome &ro : right.outcomes) {
      if (res.right_values.size() >= kMaxReportedRightValues) break;
      res.right_values.push_back(ro.value);
    }
    if (right.complete && !depth_exhausted) {
      res.tag = Verdict::Tag::Counterexample;
      res.message = fmt::format("left outcome {} has no related right outcome", pretty(lo.value));
    } else {
      res.tag = Verdict::Tag::Inconclusive;
      res.complete = false;
      res.message = fmt::format("left outcome {} unmatched; right exploration incomplete ({})",
                                pretty(lo.value), right.complete ? "depth" : to_string(right.bound_hit));
    }
    return res;
  }
  res.complete = left.complete && right.complete && d.exhaustive && !depth_exhausted;
  return res;
}

std::size_t resolve_workers(const CheckBounds &b) { return b.workers == 0 ? workers_from_env() : b.workers; }

// Runs every driver; the verdict is that of the first driver (in
// enumeration order) that is a counterexample, else the first inconclusive
// one, else NoCounterexample. Independent of the number of workers.
Verdict run_drivers(const std::vector<Driver> &drivers, bool truncated, const CheckBounds &b) {
  std::vector<std::optional<DriverResult>> results(drivers.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> first_cex{drivers.size()};
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= drivers.size() || i > first_cex.load()) return;
      DriverResult r = check_driver(drivers[i], b);
      if (r.tag == Verdict::Tag::Counterexample) {
        std::size_t cur = first_cex.load();
        while (i < cur && !first_cex.compare_exchange_weak(cur, i)) {
        }
      }
      results[i] = std::move(r);
    }
  };
  const std::size_t workers = std::min(resolve_workers(b), std::max<std::size_t>(drivers.size(), 1));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto &t : pool) t.join();
  }

  Verdict v;
  const std::size_t last = std::min(first_cex.load(), drivers.size() == 0 ? 0 : drivers.size() - 1);
  std::optional<std::size_t> chosen;
  if (first_cex.load() < drivers.size()) chosen = first_cex.load();
  bool complete = !truncated;
  for (std::size_t i = 0; i < drivers.size() && i <= last; ++i) {
    const DriverResult &r = *results[i];
    v.states_visited += r.states;
    ++v.clients_checked;
    note_bound(v.bound_hit, r.bound_hit);
    if (!r.complete) complete = false;
    if (!chosen && r.tag == Verdict::Tag::Inconclusive) chosen = i;
  }
  if (!chosen) {
    v.tag = Verdict::Tag::NoCounterexample;
    v.complete = complete;
    v.message = truncated ? "client enumeration truncated" : "";
    return v;
  }
  const Driver &d = drivers[*chosen];
  const DriverResult &r = *results[*chosen];
  v.tag = r.tag;
  v.complete = false;
  v.message = r.message;
  v.stuck = r.stuck;
  v.left_outcome = r.left_outcome;
  v.left_stuck = r.left_stuck;
  v.left_program = d.left;
  v.right_program = d.right;
  v.right_values = r.right_values;
  v.right_complete = r.right_complete;
  v.client = d.description;
  return v;
}

}  // namespace

Verdict check_refinement(const Expr &e1, const Expr &e2, const Type &t, const RelEnv &delta,
                         const CheckBounds &bounds) {
  DriverBuilder builder(erase_ascriptions(e1), erase_ascriptions(e2), t, delta, bounds);
  return run_drivers(builder.drivers, builder.truncated, bounds);
}

std::pair<Verdict, Verdict> check_equivalence(const Expr &e1, const Expr &e2, const Type &t,
                                              const RelEnv &delta, const CheckBounds &bounds) {
  return {check_refinement(e1, e2, t, delta, bounds), check_refinement(e2, e1, t, delta, bounds)};
}

Verdict check_ctx(const Expr &context, const Expr &e1, const Expr &e2, const Type &hole_type, CtxMode mode,
                  const CheckBounds &bounds) {
  const TypeEnv empty;
  check(empty, e1, hole_type);
  check(empty, e2, hole_type);
  Type ct = typecheck_context(empty, context, hole_type);
  if (mode == CtxMode::TrueAdequate && ct != Type::boolean()) {
    throw TypeError(TypeError::Kind::Mismatch,
                    fmt::format("expected bool, got {} (true-adequate contexts observe a boolean)", to_string(ct)),
                    context.span());
  }
  const Expr left = plug(context, e1);
  const Expr right = plug(context, e2);

  Verdict v;
  v.left_program = left;
  v.right_program = right;
  v.client = pretty(context);
  v.clients_checked = 1;

  OutcomeGoal goal = [mode](const Val &val, const Heap &) {
    return mode == CtxMode::Plain || (val.kind() == ExprKind::Bool && val.expr().bool_value());
  };

  ExploreReport lrep = explore_all(left, bounds.left);
  v.states_visited += lrep.states_visited;
  note_bound(v.bound_hit, lrep.bound_hit);
  if (!lrep.stuck.empty()) {
    v.tag = Verdict::Tag::Counterexample;
    v.complete = false;
    v.stuck = true;
    v.left_stuck = lrep.stuck.front();
    v.message = fmt::format("left program gets stuck at `{}`", pretty(lrep.stuck.front().redex));
    return v;
  }
  const Outcome *witness = nullptr;
  for (const Outcome &o : lrep.outcomes) {
    if (goal(o.value, o.heap)) {
      witness = &o;
      break;
    }
  }
  if (witness == nullptr) {
    v.tag = Verdict::Tag::NoCounterexample;
    v.complete = lrep.complete;
    v.message = mode == CtxMode::Plain ? "left never terminates" : "left never reaches true";
    return v;
  }
  SearchResult rs = search_outcome(right, goal, bounds.right);
  v.states_visited += rs.states_visited;
  note_bound(v.bound_hit, rs.bound_hit);
  v.right_complete = rs.found.has_value() || rs.complete;
  if (rs.found) {
    v.tag = Verdict::Tag::NoCounterexample;
    v.complete = true;
    return v;
  }
  v.left_outcome = *witness;
  ExploreReport rrep = explore_all(right, bounds.right);
  for (const Outcome &o : rrep.outcomes) {
    if (v.right_values.size() >= kMaxReportedRightValues) break;
    v.right_values.push_back(o.value);
  }
  if (rs.complete) {
    v.tag = Verdict::Tag::Counterexample;
    v.complete = false;
    v.message = mode == CtxMode::Plain
                    ? fmt::format("left terminates with {}; right never terminates", pretty(witness->value))
                    : "left reaches true; right never does";
  } else {
    v.tag = Verdict::Tag::Inconclusive;
    v.complete = false;
    v.message = fmt::format("right search incomplete ({})", to_string(rs.bound_hit));
  }
  return v;
}

}  // namespace reloc
