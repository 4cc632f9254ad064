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


#include "oracles.hpp"

#include <deque>
#include <map>
#include <memory>

#include <fmt/format.h>

#include "reloc/parser.hpp"

namespace reloc::oracle {

// Named-variable types. Binders carry names; free variables are written gN
// for outer index N.

namespace {

struct NType {
  TypeKind kind;
  std::string name;  // Var: referenced name; binders: bound name
  std::vector<std::shared_ptr<NType>> kids;
};
using NPtr = std::shared_ptr<NType>;

NPtr to_named(const Type &t, std::vector<std::string> &scope, int &counter) {
  auto n = std::make_shared<NType>();
  n->kind = t.kind();
  switch (t.kind()) {
    case TypeKind::Var: {
      const std::size_t i = t.index();
      n->name = i < scope.size() ? scope[scope.size() - 1 - i] : fmt::format("g{}", i - scope.size());
      break;
    }
    case TypeKind::Forall:
    case TypeKind::Exists:
    case TypeKind::Rec:
      n->name = fmt::format("b{}", counter++);
      scope.push_back(n->name);
      n->kids.push_back(to_named(t.body(), scope, counter));
      scope.pop_back();
      break;
    case TypeKind::Prod:
    case TypeKind::Sum:
    case TypeKind::Arrow:
      n->kids.push_back(to_named(t.lhs(), scope, counter));
      n->kids.push_back(to_named(t.rhs(), scope, counter));
      break;
    case TypeKind::Ref:
      n->kids.push_back(to_named(t.lhs(), scope, counter));
      break;
    default:
      break;
  }
  return n;
}

NPtr replace(const NPtr &t, const std::string &x, const NPtr &by) {
  if (t->kind == TypeKind::Var) return t->name == x ? by : t;
  if (!t->name.empty() && t->name == x) return t;  // shadowed
  auto out = std::make_shared<NType>(*t);
  for (auto &k : out->kids) k = replace(k, x, by);
  return out;
}

Type from_named(const NPtr &t, std::vector<std::string> &scope) {
  switch (t->kind) {
    case TypeKind::Var: {
      for (std::size_t i = 0; i < scope.size(); ++i) {
        if (scope[scope.size() - 1 - i] == t->name) return Type::var(i);
      }
      // gN is free index N.
      return Type::var(scope.size() + static_cast<std::size_t>(std::stoul(t->name.substr(1))));
    }
    case TypeKind::Unit:
      return Type::unit();
    case TypeKind::Bool:
      return Type::boolean();
    case TypeKind::Int:
      return Type::integer();
    case TypeKind::Proph:
      return Type::proph();
    case TypeKind::Prod:
      return Type::prod(from_named(t->kids[0], scope), from_named(t->kids[1], scope));
    case TypeKind::Sum:
      return Type::sum(from_named(t->kids[0], scope), from_named(t->kids[1], scope));
    case TypeKind::Arrow:
      return Type::arrow(from_named(t->kids[0], scope), from_named(t->kids[1], scope));
    case TypeKind::Ref:
      return Type::ref(from_named(t->kids[0], scope));
    case TypeKind::Forall:
    case TypeKind::Exists:
    case TypeKind::Rec: {
      scope.push_back(t->name);
      Type body = from_named(t->kids[0], scope);
      scope.pop_back();
      if (t->kind == TypeKind::Forall) return Type::forall(body);
      if (t->kind == TypeKind::Exists) return Type::exists(body);
      return Type::rec(body);
    }
    default:
      throw std::logic_error("unexpected type kind");
  }
}

}  // namespace

Type named_type_subst(const Type &body, const Type &arg) {
  int counter = 0;
  // The body sits under one binder named "hole"; its other free variables
  // come out as gN already lowered past that binder.
  std::vector<std::string> scope = {"hole"};
  NPtr b = to_named(body, scope, counter);
  std::vector<std::string> empty;
  NPtr a = to_named(arg, empty, counter);
  NPtr r = replace(b, "hole", a);
  return from_named(r, empty);
}

// Outcome normalization.

namespace {

class Normalizer {
 public:
  explicit Normalizer(const Heap &heap) : heap_(heap) {}

  std::string run(const Val &v) {
    std::string out = walk(v.expr());
    std::string cells;
    for (std::size_t k = 0; k < order_.size(); ++k) {
      // Walking a cell may discover further cells; order_ grows as we go.
      cells += fmt::format(" L{}={}", k, walk(heap_.cells[order_[k]].expr()));
    }
    return out + " |" + cells;
  }

 private:
  std::string walk(const Expr &e) {
    switch (e.kind()) {
      case ExprKind::Loc: {
        auto [it, fresh] = locs_.try_emplace(e.loc_id(), locs_.size());
        if (fresh) order_.push_back(e.loc_id());
        return fmt::format("L{}", it->second);
      }
      case ExprKind::Proph: {
        auto [it, fresh] = prophs_.try_emplace(e.proph_id(), prophs_.size());
        return fmt::format("P{}", it->second);
      }
      case ExprKind::Int:
        return std::to_string(e.int_value());
      case ExprKind::Bool:
        return e.bool_value() ? "true" : "false";
      case ExprKind::Unit:
        return "()";
      default:
        break;
    }
    if (!e.has_runtime_ids()) return "{" + pretty(e) + "}";
    std::string s = fmt::format("({}:{}:{}", static_cast<int>(e.kind()), e.name(), e.name2());
    for (const Expr &c : e.children()) s += " " + walk(c);
    return s + ")";
  }

  const Heap &heap_;
  std::map<std::size_t, std::size_t> locs_;
  std::map<std::size_t, std::size_t> prophs_;
  std::vector<std::size_t> order_;
};

void naive_dfs(const Config &cfg, std::size_t depth, std::size_t max_steps, NaiveReport &r) {
  r.longest_path = std::max(r.longest_path, depth);
  if (cfg.threads[0].is_value()) r.outcomes.insert(normalize_outcome(Val(cfg.threads[0]), cfg.heap));
  for (std::size_t i = 0; i < cfg.threads.size(); ++i) {
    ThreadStep s = thread_step(cfg, i);
    if (s.status == ThreadStatus::Stuck) r.stuck = true;
    if (s.status != ThreadStatus::Stepped) continue;
    if (depth >= max_steps) {
      r.step_bound_hit = true;
      continue;
    }
    naive_dfs(s.step->config, depth + 1, max_steps, r);
  }
}

}  // namespace

std::string normalize_outcome(const Val &v, const Heap &heap) { return Normalizer(heap).run(v); }

NaiveReport naive_explore(const Expr &e, std::size_t max_steps) {
  NaiveReport r;
  naive_dfs(init_config(e), 0, max_steps, r);
  return r;
}

std::optional<Type> ground_value_type(const Expr &v) {
  switch (v.kind()) {
    case ExprKind::Unit:
      return Type::unit();
    case ExprKind::Bool:
      return Type::boolean();
    case ExprKind::Int:
      return Type::integer();
    case ExprKind::Pair: {
      auto a = ground_value_type(v.child(0));
      auto b = ground_value_type(v.child(1));
      if (!a || !b) return std::nullopt;
      return Type::prod(*a, *b);
    }
    default:
      return std::nullopt;
  }
}

// Typing rules: one positive and one negative case each.

const std::vector<TypingCase> &typing_cases() {
  using K = TypeError::Kind;
  auto pos = [](std::string rule, std::string src, std::string ty, std::optional<std::string> decl = {}) {
    return TypingCase{std::move(rule), true, std::move(src), std::move(decl), std::move(ty), K::Mismatch};
  };
  auto neg = [](std::string rule, std::string src, K kind, std::optional<std::string> decl = {}) {
    return TypingCase{std::move(rule), false, std::move(src), std::move(decl), "", kind};
  };
  static const std::vector<TypingCase> cases = {
      pos("var-typed", "λ x. x", "int -> int", "int -> int"),
      neg("var-typed", "λ x. y", K::UnboundVar, "int -> int"),
      pos("proj-typed", "π2 (1, true)", "bool"),
      neg("proj-typed", "π1 5", K::Mismatch),
      pos("rec-typed", "rec f n = if n < 1 then 0 else n + f (n - 1)", "int -> int", "int -> int"),
      neg("rec-typed", "λ x. x", K::Mismatch, "int -> bool"),
      pos("tlam-typed", "Λ (λ x. x)", "forall a. a -> a", "forall a. a -> a"),
      neg("tlam-typed", "Λ (λ x. 1)", K::Mismatch, "forall a. a -> a"),
      pos("tapp-typed", "((Λ (λ x. x)) : forall a. a -> a) <> 5", "int"),
      neg("tapp-typed", "(λ x. x) <>", K::Mismatch),
      pos("tpack-typed", "pack (1, (λ n. if n = 0 then 1 else 0), (λ n. n = 1))", "TBit", "TBit"),
      neg("tpack-typed", "pack (1, (λ n. true), (λ n. n = 1))", K::Mismatch, "TBit"),
      pos("tunpack-typed", "unpack (pack (true, (λ b. ~b), (λ b. b)) : TBit) as p in (π2 p) (π1 (π1 p))", "bool"),
      neg("tunpack-typed", "unpack (pack (true, (λ b. ~b), (λ b. b)) : TBit) as p in π1 (π1 p)",
          K::EscapingTypeVar),
      pos("fold-typed", "fold (inl ())", "mu a. unit + (int * a)", "mu a. unit + (int * a)"),
      neg("fold-typed", "fold (inl 1)", K::Mismatch, "mu a. unit + (int * a)"),
      pos("unfold-typed", "unfold (fold (inl ()) : mu a. unit + (int * a))", "unit + (int * (mu a. unit + (int * a)))"),
      neg("unfold-typed", "unfold 3", K::Mismatch),
      pos("alloc-typed", "ref (1, true)", "ref (int * bool)"),
      neg("alloc-typed", "ref 1", K::Mismatch, "ref bool"),
      pos("load-typed", "!(ref 3)", "int"),
      neg("load-typed", "!3", K::Mismatch),
      pos("store-typed", "ref 1 <- 2", "unit"),
      neg("store-typed", "ref 1 <- true", K::Mismatch),
      pos("cas-typed", "CAS(ref 0, 0, 1)", "bool"),
      neg("cas-typed", "CAS(ref (1, 2), (1, 2), (3, 4))", K::EqTypeViolation),
      pos("fork-typed", "fork { ref 0 <- 1 }", "unit"),
      neg("fork-typed", "fork { 1 }", K::Mismatch),
      // Standard rules.
      pos("app", "(λ x. x + 1) 2", "int"),
      neg("app", "1 2", K::NotAFunction),
      pos("pair", "(1, (true, ()))", "int * (bool * unit)"),
      neg("pair", "(1, 2)", K::Mismatch, "int * bool"),
      pos("inj", "inr true", "int + bool", "int + bool"),
      neg("inj", "inl true", K::Mismatch, "int + bool"),
      pos("match", "match (inl 1 : int + bool) with inl n -> n | inr b -> 0 end", "int"),
      neg("match", "match (inl 1 : int + bool) with inl n -> n | inr b -> b end", K::Mismatch),
      pos("if", "if 1 < 2 then 3 else 4", "int"),
      neg("if", "if 1 then 3 else 4", K::Mismatch),
      pos("binop", "(1 + 2 * 3 = 7) && true", "bool"),
      neg("binop", "(1, 2) = (1, 2)", K::EqTypeViolation),
      pos("unop", "~false", "bool"),
      neg("unop", "~0", K::Mismatch),
      pos("literal", "()", "unit"),
      neg("literal", "true", K::Mismatch, "int"),
      pos("newproph", "newproph", "proph"),
      neg("newproph", "newproph", K::Mismatch, "int"),
      pos("resolve", "resolve newproph true", "unit"),
      neg("resolve", "resolve newproph (1, 2)", K::EqTypeViolation),
      pos("ascribe", "(λ x. x : bool -> bool)", "bool -> bool"),
      neg("ascribe", "(1 : bool)", K::Mismatch),
      pos("eq-sum", "CAS(ref (inl () : unit + int), inl (), inr 3)", "bool"),
      neg("eq-arrow", "CAS(ref (λ x. x : int -> int), (λ x. x), (λ x. x))", K::EqTypeViolation),
  };
  return cases;
}

std::optional<std::string> run_typing_case(const TypingCase &c) {
  try {
    const Expr e = parse_expr(c.source);
    std::optional<Type> decl;
    if (c.declared) decl = parse_type(*c.declared);
    Type t = typecheck_program(e, decl);
    if (!c.positive) return fmt::format("expected {}, but typed at {}", to_string(c.expected_error), to_string(t));
    Type want = parse_type(c.expected_type);
    if (t != want) return fmt::format("expected {}, got {}", to_string(want), to_string(t));
    return std::nullopt;
  } catch (const TypeError &ex) {
    if (c.positive) return fmt::format("unexpected {}: {}", to_string(ex.kind()), ex.what());
    if (ex.kind() != c.expected_error) {
      return fmt::format("expected {}, got {}: {}", to_string(c.expected_error), to_string(ex.kind()), ex.what());
    }
    return std::nullopt;
  } catch (const std::exception &ex) {
    return fmt::format("error: {}", ex.what());
  }
}

}  // namespace reloc::oracle
