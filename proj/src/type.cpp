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

#include "reloc/type.hpp"

#include <fmt/format.h>

#include <cassert>
#include <utility>

#include "reloc/hash.hpp"

namespace reloc {

struct Type::Node {
  TypeKind kind;
  std::size_t index = 0;
  Type lhs;
  Type rhs;
  std::uint64_t hash = 0;

  // Leaf constructor; avoids the recursive default Type() for children.
  Node(TypeKind k, std::size_t i) : kind(k), index(i), lhs(nullptr), rhs(nullptr) {
    hash = hash_combine(static_cast<std::uint64_t>(k) + 0x9e37, i);
  }
  Node(TypeKind k, Type a, Type b) : kind(k), lhs(std::move(a)), rhs(std::move(b)) {
    hash = hash_combine(static_cast<std::uint64_t>(k) + 0x9e37, 0);
    if (lhs.node_) hash = hash_combine(hash, lhs.hash());
    if (rhs.node_) hash = hash_combine(hash, rhs.hash());
  }
};

namespace {

const std::shared_ptr<const Type::Node> &leaf(TypeKind k) {
  static const auto unit = std::make_shared<const Type::Node>(TypeKind::Unit, 0);
  static const auto boolean = std::make_shared<const Type::Node>(TypeKind::Bool, 0);
  static const auto integer = std::make_shared<const Type::Node>(TypeKind::Int, 0);
  static const auto proph = std::make_shared<const Type::Node>(TypeKind::Proph, 0);
  switch (k) {
    case TypeKind::Unit:
      return unit;
    case TypeKind::Bool:
      return boolean;
    case TypeKind::Int:
      return integer;
    default:
      return proph;
  }
}

}  // namespace

Type::Type() : node_(leaf(TypeKind::Unit)) {}
Type::Type(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Type Type::var(std::size_t index) {
  return Type(std::make_shared<const Node>(TypeKind::Var, index));
}
Type Type::unit() { return Type(leaf(TypeKind::Unit)); }
Type Type::boolean() { return Type(leaf(TypeKind::Bool)); }
Type Type::integer() { return Type(leaf(TypeKind::Int)); }
Type Type::proph() { return Type(leaf(TypeKind::Proph)); }
Type Type::prod(Type lhs, Type rhs) {
  return Type(std::make_shared<const Node>(TypeKind::Prod, std::move(lhs), std::move(rhs)));
}
Type Type::sum(Type lhs, Type rhs) {
  return Type(std::make_shared<const Node>(TypeKind::Sum, std::move(lhs), std::move(rhs)));
}
Type Type::arrow(Type dom, Type cod) {
  return Type(std::make_shared<const Node>(TypeKind::Arrow, std::move(dom), std::move(cod)));
}
Type Type::forall(Type body) {
  return Type(std::make_shared<const Node>(TypeKind::Forall, std::move(body), Type(nullptr)));
}
Type Type::exists(Type body) {
  return Type(std::make_shared<const Node>(TypeKind::Exists, std::move(body), Type(nullptr)));
}
Type Type::rec(Type body) {
  return Type(std::make_shared<const Node>(TypeKind::Rec, std::move(body), Type(nullptr)));
}
Type Type::ref(Type payload) {
  return Type(std::make_shared<const Node>(TypeKind::Ref, std::move(payload), Type(nullptr)));
}
Type Type::meta(std::size_t id) {
  return Type(std::make_shared<const Node>(TypeKind::Meta, id));
}
Type Type::skolem(std::size_t id) {
  return Type(std::make_shared<const Node>(TypeKind::Skolem, id));
}

TypeKind Type::kind() const { return node_->kind; }
std::size_t Type::index() const { return node_->index; }
const Type &Type::lhs() const { return node_->lhs; }
const Type &Type::rhs() const { return node_->rhs; }
std::uint64_t Type::hash() const { return node_->hash; }

bool operator==(const Type &a, const Type &b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.node_->hash != b.node_->hash || a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TypeKind::Var:
    case TypeKind::Meta:
    case TypeKind::Skolem:
      return a.index() == b.index();
    case TypeKind::Unit:
    case TypeKind::Bool:
    case TypeKind::Int:
    case TypeKind::Proph:
      return true;
    case TypeKind::Prod:
    case TypeKind::Sum:
    case TypeKind::Arrow:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    case TypeKind::Forall:
    case TypeKind::Exists:
    case TypeKind::Rec:
    case TypeKind::Ref:
      return a.lhs() == b.lhs();
  }
  return false;
}

namespace {

bool word_type(const Type &t) {
  switch (t.kind()) {
    case TypeKind::Unit:
    case TypeKind::Bool:
    case TypeKind::Int:
    case TypeKind::Ref:
      return true;
    default:
      return false;
  }
}

}  // namespace

bool eq_type(const Type &t) {
  if (t.kind() == TypeKind::Sum) return word_type(t.lhs()) && word_type(t.rhs());
  return word_type(t);
}

namespace {

// Maps every node; `on_var` handles Var leaves given the binder depth.
template <typename F>
Type map_vars(const Type &t, std::size_t depth, const F &on_var) {
  switch (t.kind()) {
    case TypeKind::Var:
      return on_var(t.index(), depth);
    case TypeKind::Unit:
    case TypeKind::Bool:
    case TypeKind::Int:
    case TypeKind::Proph:
    case TypeKind::Meta:
    case TypeKind::Skolem:
      return t;
    case TypeKind::Prod:
      return Type::prod(map_vars(t.lhs(), depth, on_var), map_vars(t.rhs(), depth, on_var));
    case TypeKind::Sum:
      return Type::sum(map_vars(t.lhs(), depth, on_var), map_vars(t.rhs(), depth, on_var));
    case TypeKind::Arrow:
      return Type::arrow(map_vars(t.lhs(), depth, on_var), map_vars(t.rhs(), depth, on_var));
    case TypeKind::Forall:
      return Type::forall(map_vars(t.body(), depth + 1, on_var));
    case TypeKind::Exists:
      return Type::exists(map_vars(t.body(), depth + 1, on_var));
    case TypeKind::Rec:
      return Type::rec(map_vars(t.body(), depth + 1, on_var));
    case TypeKind::Ref:
      return Type::ref(map_vars(t.body(), depth, on_var));
  }
  return t;
}

}  // namespace

Type shift_type(const Type &t, std::ptrdiff_t amount, std::size_t cutoff) {
  if (amount == 0) return t;
  return map_vars(t, cutoff, [amount](std::size_t i, std::size_t depth) {
    if (i < depth) return Type::var(i);
    assert(static_cast<std::ptrdiff_t>(i) + amount >= 0);
    return Type::var(static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) + amount));
  });
}

Type type_subst(const Type &body, const Type &arg) {
  return map_vars(body, 0, [&arg](std::size_t i, std::size_t depth) {
    if (i < depth) return Type::var(i);
    if (i == depth) return shift_type(arg, static_cast<std::ptrdiff_t>(depth));
    return Type::var(i - 1);
  });
}

bool type_closed(const Type &t, std::size_t depth) {
  switch (t.kind()) {
    case TypeKind::Var:
      return t.index() < depth;
    case TypeKind::Prod:
    case TypeKind::Sum:
    case TypeKind::Arrow:
      return type_closed(t.lhs(), depth) && type_closed(t.rhs(), depth);
    case TypeKind::Forall:
    case TypeKind::Exists:
    case TypeKind::Rec:
      return type_closed(t.body(), depth + 1);
    case TypeKind::Ref:
      return type_closed(t.body(), depth);
    default:
      return true;
  }
}

namespace {

template <typename Pred>
bool any_node(const Type &t, const Pred &pred) {
  if (pred(t)) return true;
  switch (t.kind()) {
    case TypeKind::Prod:
    case TypeKind::Sum:
    case TypeKind::Arrow:
      return any_node(t.lhs(), pred) || any_node(t.rhs(), pred);
    case TypeKind::Forall:
    case TypeKind::Exists:
    case TypeKind::Rec:
    case TypeKind::Ref:
      return any_node(t.body(), pred);
    default:
      return false;
  }
}

}  // namespace

bool contains_meta(const Type &t) {
  return any_node(t, [](const Type &n) { return n.kind() == TypeKind::Meta; });
}

bool contains_skolem(const Type &t, std::size_t id) {
  return any_node(t, [id](const Type &n) {
    return n.kind() == TypeKind::Skolem && n.index() == id;
  });
}

bool is_first_order(const Type &t) {
  return !any_node(t, [](const Type &n) {
    return n.kind() == TypeKind::Arrow || n.kind() == TypeKind::Forall ||
           n.kind() == TypeKind::Exists;
  });
}

namespace {

std::string binder_name(std::size_t depth) {
  std::string name(1, static_cast<char>('a' + depth % 26));
  if (depth >= 26) name += std::to_string(depth / 26);
  return name;
}

// Precedence: 0 arrow/binder, 1 sum operand, 2 product operand, 3 atom.
void print_type(const Type &t, std::size_t depth, int prec, std::string &out) {
  auto open = [&](int level) {
    if (prec > level) out += '(';
  };
  auto close = [&](int level) {
    if (prec > level) out += ')';
  };
  auto binder = [&](const char *kw) {
    open(0);
    out += kw;
    out += ' ';
    out += binder_name(depth);
    out += ". ";
    print_type(t.body(), depth + 1, 0, out);
    close(0);
  };
  switch (t.kind()) {
    case TypeKind::Var:
      if (t.index() < depth) {
        out += binder_name(depth - 1 - t.index());
      } else {
        out += fmt::format("?free{}", t.index() - depth);
      }
      return;
    case TypeKind::Unit:
      out += "unit";
      return;
    case TypeKind::Bool:
      out += "bool";
      return;
    case TypeKind::Int:
      out += "int";
      return;
    case TypeKind::Proph:
      out += "proph";
      return;
    case TypeKind::Meta:
      out += fmt::format("?{}", t.index());
      return;
    case TypeKind::Skolem:
      out += fmt::format("!{}", t.index());
      return;
    case TypeKind::Arrow:
      open(0);
      print_type(t.lhs(), depth, 1, out);
      out += " -> ";
      print_type(t.rhs(), depth, 0, out);
      close(0);
      return;
    case TypeKind::Sum:
      open(1);
      print_type(t.lhs(), depth, 1, out);
      out += " + ";
      print_type(t.rhs(), depth, 2, out);
      close(1);
      return;
    case TypeKind::Prod:
      open(2);
      print_type(t.lhs(), depth, 2, out);
      out += " * ";
      print_type(t.rhs(), depth, 3, out);
      close(2);
      return;
    case TypeKind::Ref:
      out += "ref ";
      print_type(t.body(), depth, 3, out);
      return;
    case TypeKind::Forall:
      binder("forall");
      return;
    case TypeKind::Exists:
      binder("exists");
      return;
    case TypeKind::Rec:
      binder("mu");
      return;
  }
}

}  // namespace

std::string to_string(const Type &t) {
  std::string out;
  print_type(t, 0, 0, out);
  return out;
}

}  // namespace reloc
