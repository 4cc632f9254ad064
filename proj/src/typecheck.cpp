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

#include "reloc/typecheck.hpp"

#include <fmt/format.h>

#include <optional>
#include <utility>
#include <vector>

namespace reloc {

TypeError::TypeError(Kind kind, std::string message, SourceSpan span)
    : std::runtime_error(fmt::format("{}:{}: {}: {}", span.line, span.column,
                                     reloc::to_string(kind), message)),
      kind_(kind),
      span_(span) {}

const char *to_string(TypeError::Kind kind) {
  switch (kind) {
    case TypeError::Kind::Mismatch:
      return "Mismatch";
    case TypeError::Kind::UnboundVar:
      return "UnboundVar";
    case TypeError::Kind::NotAFunction:
      return "NotAFunction";
    case TypeError::Kind::EqTypeViolation:
      return "EqTypeViolation";
    case TypeError::Kind::NeedsAnnotation:
      return "NeedsAnnotation";
    case TypeError::Kind::EscapingTypeVar:
      return "EscapingTypeVar";
    case TypeError::Kind::HoleUnderBinder:
      return "HoleUnderBinder";
  }
  return "TypeError";
}

namespace {

using Kind = TypeError::Kind;

bool is_let(const Expr &e) {
  return e.kind() == ExprKind::App && e.child(0).kind() == ExprKind::Rec &&
         e.child(0).name() == kAnon;
}

// Metas are unification variables; skolems are rigid stand-ins for type
// variables opened by Λ and unpack. A meta may only be solved with skolems
// that existed when the meta was created.
class Checker {
 public:
  explicit Checker(std::optional<Type> hole_type = std::nullopt) : hole_type_(std::move(hole_type)) {}

  Type synth(const TypeEnv &env, const Expr &e) {
    switch (e.kind()) {
      case ExprKind::Var: {
        auto it = env.gamma.find(e.name());
        if (it == env.gamma.end()) {
          throw TypeError(Kind::UnboundVar, fmt::format("unbound variable '{}'", e.name()), e.span());
        }
        return it->second;
      }
      case ExprKind::Unit:
        return Type::unit();
      case ExprKind::Bool:
        return Type::boolean();
      case ExprKind::Int:
        return Type::integer();
      case ExprKind::Loc: {
        auto it = env.heap.find(e.loc_id());
        if (it == env.heap.end()) {
          throw TypeError(Kind::UnboundVar, fmt::format("untyped location #l{}", e.loc_id()), e.span());
        }
        return Type::ref(it->second);
      }
      case ExprKind::Proph:
      case ExprKind::NewProph:
        return Type::proph();
      case ExprKind::Hole:
        return hole(e);
      case ExprKind::Pair: {
        Type a = synth(env, e.child(0));
        Type b = synth(env, e.child(1));
        return Type::prod(std::move(a), std::move(b));
      }
      case ExprKind::Proj: {
        Type t = expect_shape(synth(env, e.child(0)), TypeKind::Prod, e.child(0).span());
        return e.proj_index() == 1 ? t.lhs() : t.rhs();
      }
      case ExprKind::Inl:
        return Type::sum(synth(env, e.child(0)), fresh_meta());
      case ExprKind::Inr: {
        Type m = fresh_meta();
        return Type::sum(std::move(m), synth(env, e.child(0)));
      }
      case ExprKind::Match: {
        Type s = expect_shape(synth(env, e.child(0)), TypeKind::Sum, e.child(0).span());
        Type t = under_binder([&] { return synth(bind(env, e.name(), s.lhs()), e.child(1)); });
        under_binder([&] { check(bind(env, e.name2(), s.rhs()), e.child(2), t); });
        return t;
      }
      case ExprKind::Rec: {
        Type arrow = Type::arrow(fresh_meta(), fresh_meta());
        check_rec(env, e, arrow);
        return arrow;
      }
      case ExprKind::App: {
        if (is_let(e)) {
          const Expr &fn = e.child(0);
          Type bound = synth(env, e.child(1));
          return synth(bind(env, fn.name2(), std::move(bound)), fn.child(0));
        }
        Type f = zonk(synth(env, e.child(0)));
        if (f.kind() == TypeKind::Meta) {
          Type arrow = Type::arrow(fresh_meta(), fresh_meta());
          unify(f, arrow, e.child(0).span());
          f = arrow;
        }
        if (f.kind() != TypeKind::Arrow) {
          throw TypeError(Kind::NotAFunction,
                          fmt::format("applying a value of type {}", to_string(f)), e.child(0).span());
        }
        check(env, e.child(1), f.lhs());
        return f.rhs();
      }
      case ExprKind::TApp: {
        Type t = zonk(synth(env, e.child(0)));
        if (t.kind() == TypeKind::Meta) {
          throw TypeError(Kind::NeedsAnnotation, "type application of an expression of unknown type", e.span());
        }
        if (t.kind() != TypeKind::Forall) {
          throw TypeError(Kind::Mismatch, fmt::format("expected a forall type, got {}", to_string(t)),
                          e.child(0).span());
        }
        return type_subst(t.body(), fresh_meta());
      }
      case ExprKind::TLam:
      case ExprKind::Pack:
      case ExprKind::Fold:
        throw TypeError(Kind::NeedsAnnotation,
                        "introduction form needs a type ascription in synthesis position", e.span());
      case ExprKind::Unpack: {
        Type packed = zonk(synth(env, e.child(0)));
        if (packed.kind() == TypeKind::Meta) {
          throw TypeError(Kind::NeedsAnnotation, "unpack of an expression of unknown type", e.child(0).span());
        }
        if (packed.kind() != TypeKind::Exists) {
          throw TypeError(Kind::Mismatch, fmt::format("expected an existential type, got {}", to_string(packed)),
                          e.child(0).span());
        }
        const std::size_t sk = next_skolem_++;
        Type opened = type_subst(packed.body(), Type::skolem(sk));
        Type result = under_binder([&] { return synth(bind(env, e.name(), opened), e.child(1)); });
        result = zonk(result);
        if (contains_skolem(result, sk)) {
          throw TypeError(Kind::EscapingTypeVar, "the unpacked type variable escapes its scope", e.span());
        }
        return result;
      }
      case ExprKind::Unfold: {
        Type t = zonk(synth(env, e.child(0)));
        if (t.kind() == TypeKind::Meta) {
          throw TypeError(Kind::NeedsAnnotation, "unfold of an expression of unknown type", e.span());
        }
        if (t.kind() != TypeKind::Rec) {
          throw TypeError(Kind::Mismatch, fmt::format("expected a recursive type, got {}", to_string(t)),
                          e.child(0).span());
        }
        return type_subst(t.body(), t);
      }
      case ExprKind::If: {
        check(env, e.child(0), Type::boolean());
        Type t = synth(env, e.child(1));
        check(env, e.child(2), t);
        return t;
      }
      case ExprKind::BinOp:
        return binop(env, e);
      case ExprKind::UnOp:
        check(env, e.child(0), Type::boolean());
        return Type::boolean();
      case ExprKind::Ref:
        return Type::ref(synth(env, e.child(0)));
      case ExprKind::Load:
        return expect_shape(synth(env, e.child(0)), TypeKind::Ref, e.child(0).span()).body();
      case ExprKind::Store: {
        Type r = expect_shape(synth(env, e.child(0)), TypeKind::Ref, e.child(0).span());
        check(env, e.child(1), r.body());
        return Type::unit();
      }
      case ExprKind::Cas: {
        Type r = expect_shape(synth(env, e.child(0)), TypeKind::Ref, e.child(0).span());
        check(env, e.child(1), r.body());
        check(env, e.child(2), r.body());
        require_eq_type(r.body(), e.span());
        return Type::boolean();
      }
      case ExprKind::Fork:
        check(env, e.child(0), Type::unit());
        return Type::unit();
      case ExprKind::Resolve: {
        check(env, e.child(0), Type::proph());
        Type v = synth(env, e.child(1));
        require_eq_type(v, e.child(1).span());
        return Type::unit();
      }
      case ExprKind::Ascribe:
        if (!type_closed(e.type(), env.xi)) {
          throw TypeError(Kind::Mismatch, "ascribed type mentions unbound type variables", e.span());
        }
        check(env, e.child(0), e.type());
        return e.type();
    }
    throw TypeError(Kind::Mismatch, "unsupported expression", e.span());
  }

  void check(const TypeEnv &env, const Expr &e, const Type &expected_in) {
    const Type expected = zonk(expected_in);
    switch (e.kind()) {
      case ExprKind::Rec:
        if (expected.kind() == TypeKind::Arrow) {
          check_rec(env, e, expected);
          return;
        }
        break;
      case ExprKind::TLam:
        if (expected.kind() == TypeKind::Forall) {
          const std::size_t sk = next_skolem_++;
          under_binder([&] { check(env, e.child(0), type_subst(expected.body(), Type::skolem(sk))); });
          return;
        }
        mismatch_intro(e, expected, "forall");
      case ExprKind::Pack:
        if (expected.kind() == TypeKind::Exists) {
          check(env, e.child(0), type_subst(expected.body(), fresh_meta()));
          return;
        }
        mismatch_intro(e, expected, "existential");
      case ExprKind::Fold:
        if (expected.kind() == TypeKind::Rec) {
          check(env, e.child(0), type_subst(expected.body(), expected));
          return;
        }
        mismatch_intro(e, expected, "recursive");
      case ExprKind::Inl:
      case ExprKind::Inr:
        if (expected.kind() == TypeKind::Sum) {
          check(env, e.child(0), e.kind() == ExprKind::Inl ? expected.lhs() : expected.rhs());
          return;
        }
        break;
      case ExprKind::Pair:
        if (expected.kind() == TypeKind::Prod) {
          check(env, e.child(0), expected.lhs());
          check(env, e.child(1), expected.rhs());
          return;
        }
        break;
      case ExprKind::Match: {
        Type s = expect_shape(synth(env, e.child(0)), TypeKind::Sum, e.child(0).span());
        under_binder([&] { check(bind(env, e.name(), s.lhs()), e.child(1), expected); });
        under_binder([&] { check(bind(env, e.name2(), s.rhs()), e.child(2), expected); });
        return;
      }
      case ExprKind::If:
        check(env, e.child(0), Type::boolean());
        check(env, e.child(1), expected);
        check(env, e.child(2), expected);
        return;
      case ExprKind::App:
        if (is_let(e)) {
          const Expr &fn = e.child(0);
          Type bound = synth(env, e.child(1));
          check(bind(env, fn.name2(), std::move(bound)), fn.child(0), expected);
          return;
        }
        break;
      case ExprKind::Unpack: {
        Type packed = zonk(synth(env, e.child(0)));
        if (packed.kind() != TypeKind::Exists) {
          throw TypeError(packed.kind() == TypeKind::Meta ? Kind::NeedsAnnotation : Kind::Mismatch,
                          fmt::format("expected an existential type, got {}", to_string(packed)),
                          e.child(0).span());
        }
        const std::size_t sk = next_skolem_++;
        Type opened = type_subst(packed.body(), Type::skolem(sk));
        under_binder([&] { check(bind(env, e.name(), opened), e.child(1), expected); });
        if (contains_skolem(zonk(expected), sk)) {
          throw TypeError(Kind::EscapingTypeVar, "the unpacked type variable escapes its scope", e.span());
        }
        return;
      }
      default:
        break;
    }
    Type actual = synth(env, e);
    unify(expected, actual, e.span());
  }

  Type zonk(const Type &t, std::size_t depth = 0) const {
    switch (t.kind()) {
      case TypeKind::Meta:
        if (metas_[t.index()].solution) {
          return shift_type(zonk(*metas_[t.index()].solution), static_cast<std::ptrdiff_t>(depth));
        }
        return t;
      case TypeKind::Prod:
        return Type::prod(zonk(t.lhs(), depth), zonk(t.rhs(), depth));
      case TypeKind::Sum:
        return Type::sum(zonk(t.lhs(), depth), zonk(t.rhs(), depth));
      case TypeKind::Arrow:
        return Type::arrow(zonk(t.lhs(), depth), zonk(t.rhs(), depth));
      case TypeKind::Forall:
        return Type::forall(zonk(t.body(), depth + 1));
      case TypeKind::Exists:
        return Type::exists(zonk(t.body(), depth + 1));
      case TypeKind::Rec:
        return Type::rec(zonk(t.body(), depth + 1));
      case TypeKind::Ref:
        return Type::ref(zonk(t.body(), depth));
      default:
        return t;
    }
  }

  /** Discharges deferred EqType side conditions. */
  void finish() {
    for (const auto &[t, span] : pending_eq_) {
      Type z = zonk(t);
      if (contains_meta(z)) {
        throw TypeError(Kind::NeedsAnnotation, "cannot determine the type compared by CAS/=/resolve", span);
      }
      if (!eq_type(z)) {
        throw TypeError(Kind::EqTypeViolation,
                        fmt::format("{} is not a word-sized type (unit, bool, int, ref or a sum of those)", to_string(z)), span);
      }
    }
  }

  bool hole_seen() const { return hole_seen_; }

 private:
  struct MetaVar {
    std::optional<Type> solution;
    std::size_t level;  // skolems with id >= level are out of scope
  };

  Type fresh_meta() {
    metas_.push_back(MetaVar{std::nullopt, next_skolem_});
    return Type::meta(metas_.size() - 1);
  }

  static TypeEnv bind(const TypeEnv &env, const std::string &x, Type t) {
    if (x == kAnon) return env;
    return env.with(x, std::move(t));
  }

  template <typename F>
  auto under_binder(F &&f) -> decltype(f()) {
    ++binder_depth_;
    struct Restore {
      int &d;
      ~Restore() { --d; }
    } restore{binder_depth_};
    return f();
  }

  Type hole(const Expr &e) {
    if (!hole_type_) {
      throw TypeError(Kind::Mismatch, "hole outside of a context", e.span());
    }
    if (binder_depth_ > 0) {
      throw TypeError(Kind::HoleUnderBinder,
                      "context hole under a λ, Λ, match or unpack binder is not supported", e.span());
    }
    hole_seen_ = true;
    return *hole_type_;
  }

  void check_rec(const TypeEnv &env, const Expr &e, const Type &arrow) {
    TypeEnv inner = bind(bind(env, e.name(), arrow), e.name2(), arrow.lhs());
    under_binder([&] { check(inner, e.child(0), arrow.rhs()); });
  }

  [[noreturn]] void mismatch_intro(const Expr &e, const Type &expected, const char *what) {
    if (expected.kind() == TypeKind::Meta) {
      throw TypeError(Kind::NeedsAnnotation,
                      "introduction form needs a type ascription in synthesis position", e.span());
    }
    throw TypeError(Kind::Mismatch, fmt::format("expected {}, got a {} introduction", to_string(expected), what),
                    e.span());
  }

  Type expect_shape(const Type &t_in, TypeKind kind, const SourceSpan &span) {
    Type t = zonk(t_in);
    if (t.kind() == kind) return t;
    if (t.kind() == TypeKind::Meta) {
      Type shape = kind == TypeKind::Prod  ? Type::prod(fresh_meta(), fresh_meta())
                   : kind == TypeKind::Sum ? Type::sum(fresh_meta(), fresh_meta())
                                           : Type::ref(fresh_meta());
      unify(t, shape, span);
      return shape;
    }
    const char *want = kind == TypeKind::Prod ? "a product" : kind == TypeKind::Sum ? "a sum" : "a reference";
    throw TypeError(Kind::Mismatch, fmt::format("expected {} type, got {}", want, to_string(t)), span);
  }

  void require_eq_type(const Type &t, const SourceSpan &span) {
    Type z = zonk(t);
    if (contains_meta(z)) {
      pending_eq_.emplace_back(z, span);
      return;
    }
    if (!eq_type(z)) {
      throw TypeError(Kind::EqTypeViolation,
                      fmt::format("{} is not a word-sized type (unit, bool, int, ref or a sum of those)", to_string(z)), span);
    }
  }

  Type binop(const TypeEnv &env, const Expr &e) {
    switch (e.binop_kind()) {
      case BinOpKind::Add:
      case BinOpKind::Sub:
      case BinOpKind::Mul:
        check(env, e.child(0), Type::integer());
        check(env, e.child(1), Type::integer());
        return Type::integer();
      case BinOpKind::Lt:
        check(env, e.child(0), Type::integer());
        check(env, e.child(1), Type::integer());
        return Type::boolean();
      case BinOpKind::And:
        check(env, e.child(0), Type::boolean());
        check(env, e.child(1), Type::boolean());
        return Type::boolean();
      case BinOpKind::Eq: {
        Type t = synth(env, e.child(0));
        check(env, e.child(1), t);
        require_eq_type(t, e.span());
        return Type::boolean();
      }
    }
    return Type::boolean();
  }

  void unify(const Type &expected, const Type &actual, const SourceSpan &span) {
    if (!unify_at(zonk(expected), zonk(actual), 0, span)) {
      throw TypeError(Kind::Mismatch,
                      fmt::format("expected {}, got {}", to_string(zonk(expected)), to_string(zonk(actual))),
                      span);
    }
  }

  bool unify_at(const Type &a, const Type &b, std::size_t depth, const SourceSpan &span) {
    if (a.kind() == TypeKind::Meta && b.kind() == TypeKind::Meta && a.index() == b.index()) return true;
    if (a.kind() == TypeKind::Meta) return solve(a.index(), b, depth, span);
    if (b.kind() == TypeKind::Meta) return solve(b.index(), a, depth, span);
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case TypeKind::Var:
      case TypeKind::Skolem:
        return a.index() == b.index();
      case TypeKind::Prod:
      case TypeKind::Sum:
      case TypeKind::Arrow:
        return unify_at(a.lhs(), b.lhs(), depth, span) &&
               unify_at(zonk(a.rhs()), zonk(b.rhs()), depth, span);
      case TypeKind::Forall:
      case TypeKind::Exists:
      case TypeKind::Rec:
        return unify_at(a.body(), b.body(), depth + 1, span);
      case TypeKind::Ref:
        return unify_at(a.body(), b.body(), depth, span);
      default:
        return true;
    }
  }

  bool solve(std::size_t meta, const Type &t_in, std::size_t depth, const SourceSpan &span) {
    Type t = zonk(t_in);
    if (!type_closed_above(t, depth)) return false;  // would capture a bound variable
    bool occurs = false;
    bool escapes = false;
    walk(t, [&](const Type &n) {
      if (n.kind() == TypeKind::Meta) {
        if (n.index() == meta) occurs = true;
        auto &other = metas_[n.index()];
        other.level = std::min(other.level, metas_[meta].level);
      }
      if (n.kind() == TypeKind::Skolem && n.index() >= metas_[meta].level) escapes = true;
    });
    if (occurs) return false;
    if (escapes) {
      throw TypeError(Kind::EscapingTypeVar, "a type variable escapes its scope through inference", span);
    }
    metas_[meta].solution = shift_type(t, -static_cast<std::ptrdiff_t>(depth), depth);
    return true;
  }

  // True when no Var index below `depth` occurs free (those are binders
  // between the meta and the solution).
  static bool type_closed_above(const Type &t, std::size_t depth, std::size_t inner = 0) {
    switch (t.kind()) {
      case TypeKind::Var:
        return t.index() < inner || t.index() >= inner + depth;
      case TypeKind::Prod:
      case TypeKind::Sum:
      case TypeKind::Arrow:
        return type_closed_above(t.lhs(), depth, inner) && type_closed_above(t.rhs(), depth, inner);
      case TypeKind::Forall:
      case TypeKind::Exists:
      case TypeKind::Rec:
        return type_closed_above(t.body(), depth, inner + 1);
      case TypeKind::Ref:
        return type_closed_above(t.body(), depth, inner);
      default:
        return true;
    }
  }

  template <typename F>
  static void walk(const Type &t, const F &f) {
    f(t);
    switch (t.kind()) {
      case TypeKind::Prod:
      case TypeKind::Sum:
      case TypeKind::Arrow:
        walk(t.lhs(), f);
        walk(t.rhs(), f);
        return;
      case TypeKind::Forall:
      case TypeKind::Exists:
      case TypeKind::Rec:
      case TypeKind::Ref:
        walk(t.body(), f);
        return;
      default:
        return;
    }
  }

  std::optional<Type> hole_type_;
  bool hole_seen_ = false;
  int binder_depth_ = 0;
  std::size_t next_skolem_ = 0;
  std::vector<MetaVar> metas_;
  std::vector<std::pair<Type, SourceSpan>> pending_eq_;
};

Type finish_synth(Checker &c, const Type &raw, const Expr &e) {
  c.finish();
  Type t = c.zonk(raw);
  if (contains_meta(t)) {
    throw TypeError(Kind::NeedsAnnotation,
                    fmt::format("ambiguous type {}; add a type ascription", to_string(t)), e.span());
  }
  return t;
}

}  // namespace

Type synth(const TypeEnv &env, const Expr &e) {
  Checker c;
  Type raw = c.synth(env, e);
  return finish_synth(c, raw, e);
}

void check(const TypeEnv &env, const Expr &e, const Type &expected) {
  Checker c;
  c.check(env, e, expected);
  c.finish();
}

Type typecheck_context(const TypeEnv &env, const Expr &context, const Type &hole_type) {
  if (context.hole_count() != 1) {
    throw TypeError(TypeError::Kind::Mismatch,
                    fmt::format("a context must contain exactly one hole, found {}", context.hole_count()),
                    context.span());
  }
  Checker c(hole_type);
  Type raw = c.synth(env, context);
  return finish_synth(c, raw, context);
}

Type typecheck_program(const Expr &e, const std::optional<Type> &declared) {
  if (declared) {
    check(TypeEnv{}, e, *declared);
    return *declared;
  }
  return synth(TypeEnv{}, e);
}

}  // namespace reloc
