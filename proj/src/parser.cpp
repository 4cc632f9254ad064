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

#include "reloc/parser.hpp"

#include <fmt/format.h>

#include <array>
#include <cctype>
#include <charconv>
#include <set>
#include <utility>

namespace reloc {

ParseError::ParseError(Kind kind, std::string message, SourceSpan span,
                       std::vector<std::string> expected)
    : std::runtime_error(fmt::format("{}:{}: {}", span.line, span.column, message)),
      kind_(kind),
      span_(span),
      expected_(std::move(expected)) {}

const TypeAliases &default_type_aliases() {
  static const TypeAliases aliases = [] {
    TypeAliases a;
    // exists a. a * (a -> a) * (a -> bool)
    Type alpha = Type::var(0);
    a.emplace("TBit", Type::exists(Type::prod(Type::prod(alpha, Type::arrow(alpha, alpha)),
                                              Type::arrow(alpha, Type::boolean()))));
    return a;
  }();
  return aliases;
}

namespace {

// 2^63: the largest literal magnitude, only valid after a minus sign.
constexpr std::uint64_t kMaxMagnitude = std::uint64_t{1} << 63;

enum class Tag { Ident, Int, Sym, Loc, Proph, End };

struct Token {
  Tag tag;
  std::string text;  // normalized symbol or keyword; identifier name
  std::uint64_t value = 0;  // magnitude of integer literals; runtime ids
  SourceSpan span;
};

const std::set<std::string, std::less<>> &keywords() {
  static const std::set<std::string, std::less<>> kw = {
      "rec",    "let",    "in",      "if",      "then",  "else",   "match", "with",
      "inl",    "inr",    "end",     "fork",    "ref",   "fold",   "unfold", "pack",
      "unpack", "as",     "newproph", "resolve", "true", "false",  "CAS",   "unit",
      "bool",   "int",    "proph",   "forall",  "exists", "mu",    "fst",   "snd",
  };
  return kw;
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      if (pos_ >= text_.size()) {
        out.push_back(Token{Tag::End, "end of input", 0, span_from(pos_, line_, col_)});
        return out;
      }
      out.push_back(next());
    }
  }

 private:
  struct Spelling {
    std::string_view text;
    std::string_view canonical;
  };

  SourceSpan span_from(std::size_t start, std::size_t line, std::size_t col) const {
    return SourceSpan{start, pos_, line, col};
  }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i) {
      const unsigned char c = static_cast<unsigned char>(text_[pos_]);
      if (c == '\n') {
        ++line_;
        col_ = 1;
      } else if ((c & 0xC0) != 0x80) {
        ++col_;
      }
      ++pos_;
    }
  }

  bool starts_with(std::string_view s) const { return text_.substr(pos_).starts_with(s); }

  void skip_trivia() {
    for (;;) {
      while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance(1);
      if (starts_with("(*")) {
        const std::size_t start = pos_, line = line_, col = col_;
        int depth = 0;
        do {
          if (pos_ >= text_.size()) {
            throw ParseError(ParseError::Kind::Syntax, "unterminated comment",
                             span_from(start, line, col), {"*)"});
          }
          if (starts_with("(*")) {
            ++depth;
            advance(2);
          } else if (starts_with("*)")) {
            --depth;
            advance(2);
          } else {
            advance(1);
          }
        } while (depth > 0);
        continue;
      }
      return;
    }
  }

  Token next() {
    static constexpr std::array<Spelling, 32> symbols = {{
        {"\xCE\xBB", "λ"},  {"\\", "λ"},        {"\xCE\x9B", "Λ"},   {"/\\", "Λ"},
        {"\xCF\x80" "1", "π1"}, {"\xCF\x80" "2", "π2"}, {"\xE2\x86\x90", "<-"}, {"<-", "<-"},
        {"\xE2\x86\x92", "->"}, {"->", "->"},  {"\xC3\x97", "*"},   {"\xE2\x88\x80", "forall"},
        {"\xE2\x88\x83", "exists"}, {"\xCE\xBC", "mu"}, {"\xC2\xAC", "~"}, {"\xE2\x88\xA7", "&&"},
        {"&&", "&&"},        {"<>", "<>"},       {"(", "("},         {")", ")"},
        {"{", "{"},          {"}", "}"},         {"[", "["},         {"]", "]"},
        {",", ","},          {";", ";"},         {".", "."},         {"=", "="},
        {"<", "<"},          {"+", "+"},         {"-", "-"},         {"|", "|"},
    }};
    static constexpr std::array<Spelling, 5> more = {{
        {"*", "*"}, {"!", "!"}, {"~", "~"}, {":", ":"}, {"#", "#"},
    }};
    const std::size_t start = pos_, line = line_, col = col_;
    const unsigned char c = static_cast<unsigned char>(text_[pos_]);

    if (c == '#' && pos_ + 2 <= text_.size() && (text_[pos_ + 1] == 'l' || text_[pos_ + 1] == 'p')) {
      const bool is_loc = text_[pos_ + 1] == 'l';
      advance(2);
      const std::size_t digits = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance(1);
      if (digits == pos_) {
        throw ParseError(ParseError::Kind::Syntax, "expected digits after runtime id prefix",
                         span_from(start, line, col), {"digit"});
      }
      Token t{is_loc ? Tag::Loc : Tag::Proph, std::string(text_.substr(start, pos_ - start)), 0,
              span_from(start, line, col)};
      std::from_chars(text_.data() + digits, text_.data() + pos_, t.value);
      return t;
    }
    if (std::isdigit(c)) {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance(1);
      Token t{Tag::Int, std::string(text_.substr(start, pos_ - start)), 0, span_from(start, line, col)};
      auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, t.value);
      if (ec != std::errc() || t.value > kMaxMagnitude) {
        throw ParseError(ParseError::Kind::Syntax, "integer literal out of range", t.span, {"integer"});
      }
      return t;
    }
    if (std::isalpha(c) || c == '_') {
      while (pos_ < text_.size()) {
        const unsigned char d = static_cast<unsigned char>(text_[pos_]);
        if (!std::isalnum(d) && d != '_' && d != '\'') break;
        advance(1);
      }
      std::string word(text_.substr(start, pos_ - start));
      if (word == "fst") return Token{Tag::Sym, "π1", 0, span_from(start, line, col)};
      if (word == "snd") return Token{Tag::Sym, "π2", 0, span_from(start, line, col)};
      const bool kw = keywords().contains(word);
      return Token{kw ? Tag::Sym : Tag::Ident, std::move(word), 0, span_from(start, line, col)};
    }
    for (const auto &s : symbols) {
      if (starts_with(s.text)) {
        advance(s.text.size());
        return Token{Tag::Sym, std::string(s.canonical), 0, span_from(start, line, col)};
      }
    }
    for (const auto &s : more) {
      if (starts_with(s.text)) {
        advance(s.text.size());
        return Token{Tag::Sym, std::string(s.canonical), 0, span_from(start, line, col)};
      }
    }
    advance(1);
    throw ParseError(ParseError::Kind::Syntax, fmt::format("unexpected character '{}'", text_.substr(start, 1)),
                     span_from(start, line, col), {"token"});
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, const TypeAliases &aliases)
      : toks_(std::move(tokens)), aliases_(aliases) {}

  Expr whole_expr() {
    Expr e = expr();
    expect_end({";", "operator", "end of input"});
    return e;
  }

  Type whole_type() {
    Type t = type();
    expect_end({"->", "+", "*", "end of input"});
    return t;
  }

 private:
  // ---- token helpers ------------------------------------------------------

  const Token &peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at(std::string_view sym, std::size_t ahead = 0) const {
    const Token &t = peek(ahead);
    return t.tag == Tag::Sym && t.text == sym;
  }
  bool accept(std::string_view sym) {
    if (!at(sym)) return false;
    ++pos_;
    return true;
  }
  const Token &take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  [[noreturn]] void fail(std::string message, std::vector<std::string> expected) const {
    throw ParseError(ParseError::Kind::Syntax,
                     fmt::format("{} (found '{}')", message, peek().text), peek().span,
                     std::move(expected));
  }

  void expect(std::string_view sym) {
    if (!accept(sym)) fail(fmt::format("expected '{}'", sym), {std::string(sym)});
  }

  void expect_end(std::vector<std::string> expected) {
    if (peek().tag != Tag::End) fail("unexpected trailing input", std::move(expected));
  }

  SourceSpan span_since(const SourceSpan &start) const {
    const SourceSpan &last = toks_[pos_ == 0 ? 0 : pos_ - 1].span;
    return SourceSpan{start.start, std::max(start.start, last.end), start.line, start.column};
  }

  std::string binder() {
    const Token &t = peek();
    if (t.tag == Tag::Ident) {
      ++pos_;
      return t.text;
    }
    fail("expected a binder name", {"identifier", "_"});
  }

  // ---- expressions ----------------------------------------------------------

  Expr expr() { return seq(); }

  Expr seq() {
    const SourceSpan start = peek().span;
    Expr first = store();
    if (accept(";")) {
      Expr rest = seq();
      return Expr::seq(std::move(first), std::move(rest), span_since(start));
    }
    return first;
  }

  Expr store() {
    const SourceSpan start = peek().span;
    Expr lhs = conj();
    if (accept("<-")) {
      Expr rhs = conj();
      return Expr::store(std::move(lhs), std::move(rhs), span_since(start));
    }
    return lhs;
  }

  Expr conj() {
    const SourceSpan start = peek().span;
    Expr lhs = compare();
    while (accept("&&")) {
      Expr rhs = compare();
      lhs = Expr::binop(BinOpKind::And, std::move(lhs), std::move(rhs), span_since(start));
    }
    return lhs;
  }

  Expr compare() {
    const SourceSpan start = peek().span;
    Expr lhs = additive();
    if (at("=") || at("<")) {
      const BinOpKind op = take().text == "=" ? BinOpKind::Eq : BinOpKind::Lt;
      Expr rhs = additive();
      return Expr::binop(op, std::move(lhs), std::move(rhs), span_since(start));
    }
    return lhs;
  }

  Expr additive() {
    const SourceSpan start = peek().span;
    Expr lhs = multiplicative();
    while (at("+") || at("-")) {
      const BinOpKind op = take().text == "+" ? BinOpKind::Add : BinOpKind::Sub;
      Expr rhs = multiplicative();
      lhs = Expr::binop(op, std::move(lhs), std::move(rhs), span_since(start));
    }
    return lhs;
  }

  Expr multiplicative() {
    const SourceSpan start = peek().span;
    Expr lhs = prefix();
    while (accept("*")) {
      Expr rhs = prefix();
      lhs = Expr::binop(BinOpKind::Mul, std::move(lhs), std::move(rhs), span_since(start));
    }
    return lhs;
  }

  Expr prefix() {
    const SourceSpan start = peek().span;
    auto unary = [&](auto make) {
      ++pos_;
      Expr operand = prefix();
      return make(std::move(operand), span_since(start));
    };
    if (at("!")) return unary([](Expr e, SourceSpan s) { return Expr::load(std::move(e), s); });
    if (at("~")) return unary([](Expr e, SourceSpan s) { return Expr::unop(UnOpKind::Not, std::move(e), s); });
    if (at("ref")) return unary([](Expr e, SourceSpan s) { return Expr::ref(std::move(e), s); });
    if (at("fold")) return unary([](Expr e, SourceSpan s) { return Expr::fold(std::move(e), s); });
    if (at("unfold")) return unary([](Expr e, SourceSpan s) { return Expr::unfold(std::move(e), s); });
    if (at("inl")) return unary([](Expr e, SourceSpan s) { return Expr::inl(std::move(e), s); });
    if (at("inr")) return unary([](Expr e, SourceSpan s) { return Expr::inr(std::move(e), s); });
    if (at("pack")) return unary([](Expr e, SourceSpan s) { return Expr::pack(std::move(e), s); });
    if (at("π1")) return unary([](Expr e, SourceSpan s) { return Expr::proj(1, std::move(e), s); });
    if (at("π2")) return unary([](Expr e, SourceSpan s) { return Expr::proj(2, std::move(e), s); });
    if (at("-") && peek(1).tag == Tag::Int) {
      ++pos_;
      const Token &lit = take();
      return Expr::integer(static_cast<std::int64_t>(std::uint64_t{0} - lit.value), span_since(start));
    }
    if (at("let") || at("λ") || at("rec") || at("Λ") || at("if") || at("unpack")) return open_form();
    return application();
  }

  // Forms whose last subexpression extends as far right as possible.
  Expr open_form() {
    const SourceSpan start = peek().span;
    if (accept("let")) {
      std::string x = binder();
      expect("=");
      Expr bound = expr();
      expect("in");
      Expr body = expr();
      return Expr::let(std::move(x), std::move(bound), std::move(body), span_since(start));
    }
    if (accept("λ")) {
      std::vector<std::string> params;
      do {
        if (at("(") && at(")", 1)) {
          pos_ += 2;
          params.emplace_back(kAnon);
        } else {
          params.push_back(binder());
        }
      } while (!at("."));
      expect(".");
      Expr body = expr();
      for (auto it = params.rbegin(); it != params.rend(); ++it) {
        body = Expr::lam(*it, std::move(body), span_since(start));
      }
      return body;
    }
    if (accept("rec")) {
      std::string f = binder();
      std::string x;
      if (at("(") && at(")", 1)) {
        pos_ += 2;
        x = std::string(kAnon);
      } else {
        x = binder();
      }
      std::vector<std::string> more;
      while (!at("=")) more.push_back(binder());
      expect("=");
      Expr body = expr();
      for (auto it = more.rbegin(); it != more.rend(); ++it) {
        body = Expr::lam(*it, std::move(body), span_since(start));
      }
      return Expr::rec(std::move(f), std::move(x), std::move(body), span_since(start));
    }
    if (accept("Λ")) {
      Expr body = expr();
      return Expr::tlam(std::move(body), span_since(start));
    }
    if (accept("if")) {
      Expr c = expr();
      expect("then");
      Expr t = expr();
      expect("else");
      Expr e = expr();
      return Expr::if_(std::move(c), std::move(t), std::move(e), span_since(start));
    }
    expect("unpack");
    Expr packed = expr();
    expect("as");
    std::string x = binder();
    expect("in");
    Expr body = expr();
    return Expr::unpack(std::move(packed), std::move(x), std::move(body), span_since(start));
  }

  bool at_atom_start() const {
    const Token &t = peek();
    switch (t.tag) {
      case Tag::Ident:
      case Tag::Int:
      case Tag::Loc:
      case Tag::Proph:
        return true;
      case Tag::End:
        return false;
      case Tag::Sym:
        return t.text == "(" || t.text == "[" || t.text == "true" || t.text == "false" ||
               t.text == "CAS" || t.text == "newproph" || t.text == "fork" || t.text == "match";
    }
    return false;
  }

  Expr application() {
    const SourceSpan start = peek().span;
    Expr head;
    if (accept("resolve")) {
      Expr p = atom();
      Expr v = atom();
      head = Expr::resolve(std::move(p), std::move(v), span_since(start));
    } else {
      head = atom();
    }
    for (;;) {
      if (accept("<>")) {
        head = Expr::tapp(std::move(head), span_since(start));
      } else if (at_atom_start()) {
        Expr arg = atom();
        head = Expr::app(std::move(head), std::move(arg), span_since(start));
      } else {
        return head;
      }
    }
  }

  Expr atom() {
    const SourceSpan start = peek().span;
    const Token &t = peek();
    switch (t.tag) {
      case Tag::Ident:
        ++pos_;
        if (t.text == kAnon) {
          throw ParseError(ParseError::Kind::Syntax, "'_' is not a variable", t.span, {"expression"});
        }
        return Expr::var(t.text, t.span);
      case Tag::Int:
        ++pos_;
        if (t.value > kMaxMagnitude - 1) {
          throw ParseError(ParseError::Kind::Syntax, "integer literal out of range", t.span, {"integer"});
        }
        return Expr::integer(static_cast<std::int64_t>(t.value), t.span);
      case Tag::Loc:
        ++pos_;
        return Expr::loc(static_cast<std::size_t>(t.value));
      case Tag::Proph:
        ++pos_;
        return Expr::proph(static_cast<std::size_t>(t.value));
      default:
        break;
    }
    if (accept("true")) return Expr::boolean(true, span_since(start));
    if (accept("false")) return Expr::boolean(false, span_since(start));
    if (accept("newproph")) return Expr::new_proph(span_since(start));
    if (accept("[")) {
      expect("]");
      return Expr::hole(span_since(start));
    }
    if (accept("CAS")) {
      expect("(");
      Expr l = expr();
      expect(",");
      Expr a = expr();
      expect(",");
      Expr b = expr();
      expect(")");
      return Expr::cas(std::move(l), std::move(a), std::move(b), span_since(start));
    }
    if (accept("fork")) {
      expect("{");
      Expr body = expr();
      expect("}");
      return Expr::fork(std::move(body), span_since(start));
    }
    if (accept("match")) {
      Expr scrutinee = expr();
      expect("with");
      accept("|");
      expect("inl");
      std::string x1 = binder();
      expect("->");
      Expr b1 = expr();
      expect("|");
      expect("inr");
      std::string x2 = binder();
      expect("->");
      Expr b2 = expr();
      expect("end");
      return Expr::match(std::move(scrutinee), std::move(x1), std::move(b1), std::move(x2),
                         std::move(b2), span_since(start));
    }
    if (accept("(")) {
      if (accept(")")) return Expr::unit(span_since(start));
      Expr e = expr();
      if (accept(":")) {
        Type ty = type();
        expect(")");
        return Expr::ascribe(std::move(e), std::move(ty), span_since(start));
      }
      while (accept(",")) {
        Expr next = expr();
        e = Expr::pair(std::move(e), std::move(next), span_since(start));
      }
      expect(")");
      return e;
    }
    fail("expected an expression",
         {"identifier", "integer", "(", "[", "true", "false", "CAS", "fork", "match", "newproph"});
  }

  // ---- types ---------------------------------------------------------------

  Type type() {
    if (at("forall") || at("exists") || at("mu")) {
      const std::string kw = take().text;
      std::vector<std::string> names;
      do {
        names.push_back(binder());
      } while (!at("."));
      expect(".");
      for (const auto &n : names) tyvars_.push_back(n);
      Type body = type();
      for (std::size_t i = 0; i < names.size(); ++i) {
        tyvars_.pop_back();
        body = kw == "forall" ? Type::forall(std::move(body))
               : kw == "exists" ? Type::exists(std::move(body))
                                : Type::rec(std::move(body));
      }
      return body;
    }
    Type lhs = sum_type();
    if (accept("->")) return Type::arrow(std::move(lhs), type());
    return lhs;
  }

  Type sum_type() {
    Type lhs = prod_type();
    while (accept("+")) lhs = Type::sum(std::move(lhs), prod_type());
    return lhs;
  }

  Type prod_type() {
    Type lhs = prefix_type();
    while (accept("*")) lhs = Type::prod(std::move(lhs), prefix_type());
    return lhs;
  }

  Type prefix_type() {
    if (accept("ref")) return Type::ref(prefix_type());
    return atom_type();
  }

  Type atom_type() {
    if (accept("unit")) return Type::unit();
    if (accept("bool")) return Type::boolean();
    if (accept("int")) return Type::integer();
    if (accept("proph")) return Type::proph();
    if (accept("(")) {
      Type t = type();
      expect(")");
      return t;
    }
    const Token &t = peek();
    if (t.tag == Tag::Ident) {
      ++pos_;
      for (std::size_t i = tyvars_.size(); i-- > 0;) {
        if (tyvars_[i] == t.text) return Type::var(tyvars_.size() - 1 - i);
      }
      if (auto it = aliases_.find(t.text); it != aliases_.end()) {
        return shift_type(it->second, static_cast<std::ptrdiff_t>(tyvars_.size()));
      }
      throw ParseError(ParseError::Kind::UnboundTypeVar,
                       fmt::format("unbound type variable '{}'", t.text), t.span,
                       {"bound type variable", "type alias"});
    }
    fail("expected a type", {"unit", "bool", "int", "ref", "(", "forall", "exists", "mu", "type variable"});
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const TypeAliases &aliases_;
  std::vector<std::string> tyvars_;
};

// ---- printer ---------------------------------------------------------------

// Precedence levels: 0 seq, 1 store, 2 &&, 3 comparison, 4 additive,
// 5 multiplicative, 6 prefix, 7 application, 8 atom. `tail` means nothing
// follows on the right before a delimiter, so open forms need no parens.
class Printer {
 public:
  std::string out;

  void print(const Expr &e, int prec, bool tail) {
    switch (e.kind()) {
      case ExprKind::Var:
        out += e.name();
        return;
      case ExprKind::Unit:
        out += "()";
        return;
      case ExprKind::Bool:
        out += e.bool_value() ? "true" : "false";
        return;
      case ExprKind::Int:
        if (e.int_value() < 0) {
          out += fmt::format("(-{})", static_cast<std::uint64_t>(0) - static_cast<std::uint64_t>(e.int_value()));
        } else {
          out += std::to_string(e.int_value());
        }
        return;
      case ExprKind::Loc:
        out += fmt::format("#l{}", e.loc_id());
        return;
      case ExprKind::Proph:
        out += fmt::format("#p{}", e.proph_id());
        return;
      case ExprKind::Hole:
        out += "[]";
        return;
      case ExprKind::NewProph:
        out += "newproph";
        return;
      case ExprKind::Pair:
        out += '(';
        print_tuple(e);
        out += ')';
        return;
      case ExprKind::Ascribe:
        out += '(';
        print(e.child(0), 0, true);
        out += " : ";
        out += to_string(e.type());
        out += ')';
        return;
      case ExprKind::Cas:
        out += "CAS(";
        print(e.child(0), 0, true);
        out += ", ";
        print(e.child(1), 0, true);
        out += ", ";
        print(e.child(2), 0, true);
        out += ')';
        return;
      case ExprKind::Fork:
        out += "fork { ";
        print(e.child(0), 0, true);
        out += " }";
        return;
      case ExprKind::Match:
        out += "match ";
        print(e.child(0), 0, true);
        out += " with inl " + e.name() + " -> ";
        print(e.child(1), 0, true);
        out += " | inr " + e.name2() + " -> ";
        print(e.child(2), 0, true);
        out += " end";
        return;
      case ExprKind::Proj:
        prefix(e, e.proj_index() == 1 ? "π1 " : "π2 ", prec, tail);
        return;
      case ExprKind::Inl:
        prefix(e, "inl ", prec, tail);
        return;
      case ExprKind::Inr:
        prefix(e, "inr ", prec, tail);
        return;
      case ExprKind::Pack:
        prefix(e, "pack ", prec, tail);
        return;
      case ExprKind::Fold:
        prefix(e, "fold ", prec, tail);
        return;
      case ExprKind::Unfold:
        prefix(e, "unfold ", prec, tail);
        return;
      case ExprKind::Ref:
        prefix(e, "ref ", prec, tail);
        return;
      case ExprKind::Load:
        prefix(e, "!", prec, tail);
        return;
      case ExprKind::UnOp:
        prefix(e, "~", prec, tail);
        return;
      case ExprKind::TApp:
        open_paren(prec > 7);
        print(e.child(0), 7, false);
        out += " <>";
        close_paren(prec > 7);
        return;
      case ExprKind::Resolve:
        open_paren(prec > 7);
        out += "resolve ";
        print(e.child(0), 8, false);
        out += ' ';
        print(e.child(1), 8, false);
        close_paren(prec > 7);
        return;
      case ExprKind::App: {
        const Expr &fn = e.child(0);
        if (fn.kind() == ExprKind::Rec && fn.name() == kAnon) {
          if (fn.name2() == kAnon) {
            const bool paren = prec > 0 || !tail;
            open_paren(paren);
            print(e.child(1), 1, false);
            out += "; ";
            print(fn.child(0), 0, tail || paren);
            close_paren(paren);
          } else {
            const bool paren = !tail;
            open_paren(paren);
            out += "let " + fn.name2() + " = ";
            print(e.child(1), 0, true);
            out += " in ";
            print(fn.child(0), 0, true);
            close_paren(paren);
          }
          return;
        }
        open_paren(prec > 7);
        print(fn, 7, false);
        out += ' ';
        print(e.child(1), 8, false);
        close_paren(prec > 7);
        return;
      }
      case ExprKind::Rec: {
        const bool paren = !tail;
        open_paren(paren);
        if (e.name() == kAnon) {
          out += "λ " + e.name2() + ". ";
        } else {
          out += "rec " + e.name() + " " + e.name2() + " = ";
        }
        print(e.child(0), 0, true);
        close_paren(paren);
        return;
      }
      case ExprKind::TLam: {
        const bool paren = !tail;
        open_paren(paren);
        out += "Λ ";
        print(e.child(0), 0, true);
        close_paren(paren);
        return;
      }
      case ExprKind::If: {
        const bool paren = !tail;
        open_paren(paren);
        out += "if ";
        print(e.child(0), 0, true);
        out += " then ";
        print(e.child(1), 0, true);
        out += " else ";
        print(e.child(2), 0, true);
        close_paren(paren);
        return;
      }
      case ExprKind::Unpack: {
        const bool paren = !tail;
        open_paren(paren);
        out += "unpack ";
        print(e.child(0), 0, true);
        out += " as " + e.name() + " in ";
        print(e.child(1), 0, true);
        close_paren(paren);
        return;
      }
      case ExprKind::Store: {
        const bool paren = prec > 1;
        open_paren(paren);
        print(e.child(0), 2, false);
        out += " <- ";
        print(e.child(1), 2, tail || paren);
        close_paren(paren);
        return;
      }
      case ExprKind::BinOp:
        binop(e, prec, tail);
        return;
    }
  }

 private:
  void open_paren(bool b) {
    if (b) out += '(';
  }
  void close_paren(bool b) {
    if (b) out += ')';
  }

  void print_tuple(const Expr &e) {
    const Expr &a = e.child(0);
    if (a.kind() == ExprKind::Pair) {
      print_tuple(a);
    } else {
      print(a, 0, true);
    }
    out += ", ";
    print(e.child(1), 0, true);
  }

  void prefix(const Expr &e, std::string_view op, int prec, bool tail) {
    const bool paren = prec > 6;
    open_paren(paren);
    out += op;
    print(e.child(0), 6, tail || paren);
    close_paren(paren);
  }

  void binop(const Expr &e, int prec, bool tail) {
    int level = 0, lp = 0, rp = 0;
    std::string_view sym;
    switch (e.binop_kind()) {
      case BinOpKind::And:
        level = 2, lp = 2, rp = 3, sym = " && ";
        break;
      case BinOpKind::Eq:
        level = 3, lp = 4, rp = 4, sym = " = ";
        break;
      case BinOpKind::Lt:
        level = 3, lp = 4, rp = 4, sym = " < ";
        break;
      case BinOpKind::Add:
        level = 4, lp = 4, rp = 5, sym = " + ";
        break;
      case BinOpKind::Sub:
        level = 4, lp = 4, rp = 5, sym = " - ";
        break;
      case BinOpKind::Mul:
        level = 5, lp = 5, rp = 6, sym = " * ";
        break;
    }
    const bool paren = prec > level;
    open_paren(paren);
    print(e.child(0), lp, false);
    out += sym;
    print(e.child(1), rp, tail || paren);
    close_paren(paren);
  }
};

}  // namespace

Expr parse_expr(std::string_view text, const TypeAliases &aliases) {
  Parser p(Lexer(text).run(), aliases);
  return p.whole_expr();
}

Type parse_type(std::string_view text, const TypeAliases &aliases) {
  Parser p(Lexer(text).run(), aliases);
  return p.whole_type();
}

Program parse_program(std::string_view text, const TypeAliases &aliases) {
  Program prog;
  std::string body(text);
  std::size_t line_start = 0;
  while (line_start < body.size()) {
    std::size_t eol = body.find('\n', line_start);
    if (eol == std::string::npos) eol = body.size();
    const std::size_t first = body.find_first_not_of(" \t\r", line_start);
    if (first < eol && body[first] == '#') {
      const std::string_view line = std::string_view(body).substr(first, eol - first);
      std::optional<Type> *slot = nullptr;
      std::size_t skip = 0;
      if (line.starts_with("#type:")) {
        slot = &prog.declared_type;
        skip = 6;
      } else if (line.starts_with("#hole:")) {
        slot = &prog.hole_type;
        skip = 6;
      }
      if (slot != nullptr) {
        *slot = parse_type(line.substr(skip), aliases);
        // Blank the pragma so spans in the body keep their file offsets.
        for (std::size_t i = first; i < eol; ++i) body[i] = ' ';
      }
    }
    line_start = eol + 1;
  }
  prog.body = parse_expr(body, aliases);
  return prog;
}

std::string pretty(const Expr &e) {
  Printer p;
  p.print(e, 0, true);
  return std::move(p.out);
}

std::string pretty(const Val &v) { return pretty(v.expr()); }

std::string pretty_type(const Type &t) { return to_string(t); }

}  // namespace reloc
