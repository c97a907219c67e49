// Copyright 2026 The gadtparam Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gadtparam/parser.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <set>

#include "gadtparam/completion.hpp"
#include "gadtparam/error.hpp"
#include "gadtparam/printer.hpp"

namespace gadtparam {

namespace {

enum class Tok {
  Ident,
  Colon,
  Arrow,
  Times,
  Forall,
  LBrace,
  RBrace,
  LParen,
  RParen,
  LBrack,
  RBrack,
  Comma,
  Semi,
  FatArrow,
  Equals,
  End
};

struct Token {
  Tok kind;
  std::string text;
  SourcePos pos;
};

const char *tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Colon: return "':'";
    case Tok::Arrow: return "'→'";
    case Tok::Times: return "'×'";
    case Tok::Forall: return "'∀'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrack: return "'['";
    case Tok::RBrack: return "']'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::FatArrow: return "'=>'";
    case Tok::Equals: return "'='";
    case Tok::End: return "end of input";
  }
  return "?";
}

bool is_ascii_ident_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool is_ascii_ident_char(unsigned char c) {
  return is_ascii_ident_start(c) || (c >= '0' && c <= '9') || c == '\'';
}

// Length of the UTF-8 sequence at s[i]; malformed bytes count as one.
std::size_t utf8_len(std::string_view s, std::size_t i) {
  unsigned char c = s[i];
  std::size_t n = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 1;
  if (i + n > s.size()) return 1;
  for (std::size_t k = 1; k < n; ++k)
    if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return 1;
  return n;
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  SourcePos pos;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++pos.line;
        pos.column = 1;
        ++i;
      } else {
        std::size_t len = utf8_len(src, i);
        i += len;
        ++pos.column;
        k += len - 1;
      }
    }
  };
  auto starts = [&](std::string_view lit) { return src.substr(i, lit.size()) == lit; };
  while (i < src.size()) {
    unsigned char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (starts("--")) {
      while (i < src.size() && src[i] != '\n') advance(utf8_len(src, i));
      continue;
    }
    SourcePos at = pos;
    auto sym = [&](Tok t, std::size_t bytes) {
      out.push_back({t, std::string(src.substr(i, bytes)), at});
      advance(bytes);
    };
    if (starts("∀")) { sym(Tok::Forall, 3); continue; }
    if (starts("→")) { sym(Tok::Arrow, 3); continue; }
    if (starts("×")) { sym(Tok::Times, 2); continue; }
    if (starts("->")) { sym(Tok::Arrow, 2); continue; }
    if (starts("=>")) { sym(Tok::FatArrow, 2); continue; }
    switch (c) {
      case ':': sym(Tok::Colon, 1); continue;
      case '*': sym(Tok::Times, 1); continue;
      case '{': sym(Tok::LBrace, 1); continue;
      case '}': sym(Tok::RBrace, 1); continue;
      case '(': sym(Tok::LParen, 1); continue;
      case ')': sym(Tok::RParen, 1); continue;
      case '[': sym(Tok::LBrack, 1); continue;
      case ']': sym(Tok::RBrack, 1); continue;
      case ',': sym(Tok::Comma, 1); continue;
      case ';': sym(Tok::Semi, 1); continue;
      case '=': sym(Tok::Equals, 1); continue;
      default: break;
    }
    if (is_ascii_ident_start(c) || c >= 0x80) {
      std::size_t start = i;
      while (i < src.size()) {
        unsigned char d = src[i];
        if (d < 0x80) {
          if (!is_ascii_ident_char(d)) break;
          advance(1);
        } else {
          if (starts("∀") || starts("→") || starts("×")) break;
          advance(1);
        }
      }
      std::string text(src.substr(start, i - start));
      out.push_back({text == "forall" ? Tok::Forall : Tok::Ident, std::move(text), at});
      continue;
    }
    throw ParseError(fmt::format("unexpected character '{}'", static_cast<char>(c)), at);
  }
  out.push_back({Tok::End, "", pos});
  return out;
}

const std::set<std::string> kReserved = {"data", "where", "let", "rel", "fun", "Set"};

class Parser {
 public:
  Parser(std::string_view text, const Env *env, const Scope *scope)
      : toks_(lex(text)), env_(env), scope_(scope) {
    if (env_)
      for (const auto &n : env_->decl_names()) decl_names_.insert(n);
    for (std::size_t k = 0; k + 1 < toks_.size(); ++k)
      if (toks_[k].kind == Tok::Ident && toks_[k].text == "data" &&
          toks_[k + 1].kind == Tok::Ident)
        decl_names_.insert(toks_[k + 1].text);
  }

  const Token &peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at(Tok t) const { return peek().kind == t; }
  bool at_word(const char *w) const { return at(Tok::Ident) && peek().text == w; }

  [[noreturn]] void fail(const std::string &msg) const { throw ParseError(msg, peek().pos); }

  Token expect(Tok t, const char *what = nullptr) {
    if (!at(t))
      fail(fmt::format("expected {}, found {}", what ? what : tok_name(t), describe(peek())));
    return toks_[pos_++];
  }
  void expect_word(const char *w) {
    if (!at_word(w)) fail(fmt::format("expected '{}', found {}", w, describe(peek())));
    ++pos_;
  }
  static std::string describe(const Token &t) {
    if (t.kind == Tok::End) return "end of input";
    return fmt::format("'{}'", t.text);
  }

  void expect_end() {
    if (!at(Tok::End)) fail(fmt::format("unexpected {}", describe(peek())));
  }

  struct DepthGuard {
    Parser &p;
    explicit DepthGuard(Parser &p) : p(p) {
      if (++p.depth_ > 200) p.fail("nesting too deep");
    }
    ~DepthGuard() { --p.depth_; }
  };

  // ------------------------------------------------------------ types

  Type type() {
    DepthGuard g(*this);
    Type left = prod();
    if (at(Tok::Arrow)) {
      ++pos_;
      return Type::arrow(std::move(left), type());
    }
    return left;
  }

  Type prod() {
    DepthGuard g(*this);
    Type left = app();
    if (at(Tok::Times)) {
      ++pos_;
      return Type::prod(std::move(left), prod());
    }
    return left;
  }

  bool atom_type_start() const {
    if (at(Tok::LParen)) return true;
    if (!at(Tok::Ident)) return false;
    if (kReserved.count(peek().text)) return false;
    return peek(1).kind != Tok::Colon;  // next constructor signature
  }

  Type app() {
    if (at(Tok::Ident) && !kReserved.count(peek().text) && peek().text != "Bool" &&
        peek().text != "Unit") {
      auto name = peek().text;
      ++pos_;
      std::vector<Type> args;
      while (atom_type_start()) args.push_back(atom_type());
      if (args.empty() && !decl_names_.count(name)) return Type::var(name);
      return Type::app(name, std::move(args));
    }
    return atom_type();
  }

  Type atom_type() {
    DepthGuard g(*this);
    if (at(Tok::LParen)) {
      ++pos_;
      Type t = type();
      expect(Tok::RParen);
      return t;
    }
    if (!at(Tok::Ident) || kReserved.count(peek().text))
      fail(fmt::format("expected a type, found {}", describe(peek())));
    auto name = toks_[pos_++].text;
    if (name == "Bool") return Type::boolean();
    if (name == "Unit") return Type::unit();
    if (decl_names_.count(name)) return Type::app(name, {});
    return Type::var(name);
  }

  // ------------------------------------------------------------ decls

  DataDecl decl() {
    expect_word("data");
    DataDecl d;
    if (!at(Tok::Ident) || kReserved.count(peek().text))
      fail(fmt::format("expected a declaration name, found {}", describe(peek())));
    d.name = toks_[pos_++].text;
    expect(Tok::Colon);
    int arity = 0;
    expect_word("Set");
    while (at(Tok::Arrow)) {
      ++pos_;
      expect_word("Set");
      ++arity;
    }
    if (arity == 0) fail("a data declaration needs at least one index (Set → Set)");
    d.arity = arity;
    expect_word("where");
    if (!(at(Tok::Ident) && peek(1).kind == Tok::Colon)) fail("expected a constructor signature");
    std::set<std::string> seen;
    while (at(Tok::Ident) && peek(1).kind == Tok::Colon && !kReserved.count(peek().text)) {
      auto name_tok = peek();
      CtorSig c = ctor(d.name);
      if (!seen.insert(c.name).second)
        throw ParseError(fmt::format("duplicate constructor {}", c.name), name_tok.pos);
      d.ctors.push_back(std::move(c));
    }
    return d;
  }

  CtorSig ctor(const std::string &decl_name) {
    CtorSig c;
    c.name = toks_[pos_++].text;
    expect(Tok::Colon);
    expect(Tok::Forall);
    expect(Tok::LBrace);
    while (at(Tok::Ident)) c.quantified.push_back(toks_[pos_++].text);
    expect(Tok::RBrace);
    expect(Tok::Arrow);
    auto ret_pos = peek().pos;
    Type t = type();
    while (t.is(Type::Kind::Arrow)) {
      c.args.push_back(t.dom());
      t = t.cod();
    }
    if (!t.is(Type::Kind::App) || t.name() != decl_name)
      throw ParseError(fmt::format("constructor {} must return an instance of {}", c.name,
                                   decl_name),
                       ret_pos);
    c.ret_instance = t.args();
    return c;
  }

  // ------------------------------------------------------------ terms

  bool atom_term_start() const {
    if (at(Tok::LParen)) return true;
    if (!at(Tok::Ident)) return false;
    return peek().text != "let" && peek().text != "data" && peek().text != "rel";
  }

  Term term() {
    DepthGuard g(*this);
    if (at(Tok::Ident) && peek(1).kind == Tok::LBrack) {
      auto [name, targs] = con_head();
      std::vector<Term> args;
      while (atom_term_start()) args.push_back(atom_term());
      return Term::con(std::move(name), std::move(targs), std::move(args));
    }
    return atom_term();
  }

  std::pair<std::string, std::vector<Type>> con_head() {
    auto name = toks_[pos_++].text;
    expect(Tok::LBrack);
    std::vector<Type> targs;
    if (!at(Tok::RBrack)) {
      targs.push_back(type());
      while (at(Tok::Comma)) {
        ++pos_;
        targs.push_back(type());
      }
    }
    expect(Tok::RBrack);
    return {std::move(name), std::move(targs)};
  }

  Term atom_term() {
    DepthGuard g(*this);
    if (at(Tok::LParen)) {
      ++pos_;
      Term a = term();
      if (at(Tok::Comma)) {
        ++pos_;
        Term b = term();
        expect(Tok::RParen);
        return Term::pair(std::move(a), std::move(b));
      }
      expect(Tok::RParen);
      return a;
    }
    if (!at(Tok::Ident)) fail(fmt::format("expected a term, found {}", describe(peek())));
    const auto &word = peek().text;
    if (word == "true" || word == "false") {
      ++pos_;
      return Term::boolean(word == "true");
    }
    if (word == "unit") {
      ++pos_;
      return Term::unit();
    }
    if (word == "fun") return fun();
    if (peek(1).kind == Tok::LBrack) {
      auto [name, targs] = con_head();
      return Term::con(std::move(name), std::move(targs), {});
    }
    if (scope_) {
      for (auto it = scope_->terms.rbegin(); it != scope_->terms.rend(); ++it)
        if (it->name == word) {
          ++pos_;
          return it->value;
        }
    }
    if (env_ && env_->owner_of(word))
      fail(fmt::format("constructor {} needs explicit type arguments [..]", word));
    fail(fmt::format("unknown name '{}'", word));
  }

  Term fun() {
    expect_word("fun");
    Type dom = atom_type();
    expect(Tok::Arrow);
    Type cod = atom_type();
    expect(Tok::LBrace);
    std::vector<Term::Row> rows;
    while (!at(Tok::RBrace)) {
      auto row_pos = peek().pos;
      Term k = term();
      expect(Tok::FatArrow);
      Term v = term();
      for (const auto &r : rows)
        if (r.first == k) throw ParseError("duplicate key in function table", row_pos);
      rows.emplace_back(std::move(k), std::move(v));
      if (at(Tok::Semi)) {
        ++pos_;
      } else if (!at(Tok::RBrace)) {
        fail(fmt::format("expected ';' or '}}', found {}", describe(peek())));
      }
    }
    expect(Tok::RBrace);
    return Term::fun(std::move(dom), std::move(cod), std::move(rows));
  }

  // ------------------------------------------------------------ relations

  Rel rel() {
    expect_word("rel");
    Type a = atom_type();
    Type b = atom_type();
    expect(Tok::LBrace);
    std::vector<Rel::Pair> pairs;
    auto body_pos = peek().pos;
    auto need_env = [&]() -> const Env & {
      if (!env_) throw ParseError("relation shorthand needs an environment", body_pos);
      return *env_;
    };
    auto with_carriers = [&](auto &&fn) {
      try {
        return fn();
      } catch (const CheckError &e) {
        throw ParseError(e.what(), body_pos);
      }
    };
    if (at_word("all")) {
      ++pos_;
      auto full = with_carriers([&] { return full_rel(a, b, need_env()); });
      std::vector<Rel::Pair> drop;
      if (at_word("except")) {
        ++pos_;
        drop = pair_list();
      }
      for (const auto &p : full.pairs())
        if (std::find(drop.begin(), drop.end(), p) == drop.end()) pairs.push_back(p);
    } else if (at_word("none")) {
      ++pos_;
    } else if (at_word("eq")) {
      ++pos_;
      if (!(a == b)) throw ParseError("'eq' needs identical source and target types", body_pos);
      auto eq = with_carriers([&] { return eq_rel(a, need_env()); });
      pairs = eq.pairs();
    } else if (!at(Tok::RBrace)) {
      pairs = pair_list();
    }
    expect(Tok::RBrace);
    return Rel(std::move(a), std::move(b), std::move(pairs));
  }

  std::vector<Rel::Pair> pair_list() {
    std::vector<Rel::Pair> out;
    while (true) {
      auto p = peek().pos;
      Term t = term();
      if (!t.is(Term::Kind::Pair)) throw ParseError("relation entries must be pairs (a, b)", p);
      out.emplace_back(t.first(), t.second());
      if (!at(Tok::Comma) && !at(Tok::Semi)) break;
      ++pos_;
    }
    return out;
  }

  // ------------------------------------------------------------ files

  std::size_t pos_ = 0;
  std::vector<Token> toks_;
  const Env *env_;
  const Scope *scope_;
  std::set<std::string> decl_names_;
  int depth_ = 0;
};

void check_rel(const Rel &r, const Env &env) {
  if (!r.src().is_closed() || !r.tgt().is_closed())
    throw CheckError("relation types must be closed");
  for (const auto &[a, b] : r.pairs()) {
    auto ta = type_of(a, env);
    auto tb = type_of(b, env);
    if (!(ta == r.src()) || !(tb == r.tgt()))
      throw CheckError(fmt::format("pair ({}, {}) does not have type {} × {}", to_string(a),
                                   to_string(b), to_string(r.src()), to_string(r.tgt())));
  }
}

}  // namespace

const Term *SourceFile::find_term(const std::string &name) const {
  for (const auto &it : items)
    if (auto *t = std::get_if<NamedTerm>(&it); t && t->name == name) return &t->value;
  return nullptr;
}

const Rel *SourceFile::find_rel(const std::string &name) const {
  for (const auto &it : items)
    if (auto *r = std::get_if<NamedRel>(&it); r && r->name == name) return &r->value;
  return nullptr;
}

std::vector<DataDecl> SourceFile::decls() const {
  std::vector<DataDecl> out;
  for (const auto &it : items)
    if (auto *d = std::get_if<DataDecl>(&it)) out.push_back(*d);
  return out;
}

std::vector<DataDecl> parse_decls(std::string_view text) {
  Parser p(text, nullptr, nullptr);
  std::vector<DataDecl> out;
  std::set<std::string> names;
  while (!p.at(Tok::End)) {
    auto at = p.peek(1).pos;
    out.push_back(p.decl());
    if (!names.insert(out.back().name).second)
      throw ParseError(fmt::format("duplicate declaration {}", out.back().name), at);
  }
  return out;
}

SourceFile parse_source(std::string_view text, Env &env, std::string path) {
  SourceFile file;
  file.path = std::move(path);
  file.text = std::string(text);
  Scope scope;
  Parser p(text, &env, &scope);
  std::set<std::string> names;
  while (!p.at(Tok::End)) {
    if (p.at_word("data")) {
      auto at = p.peek(1).pos;
      DataDecl d = p.decl();
      if (!names.insert(d.name).second || env.find_decl(d.name))
        throw ParseError(fmt::format("duplicate declaration {}", d.name), at);
      add_with_completion(env, kind_check(d, env));
      file.items.push_back(std::move(d));
      continue;
    }
    if (!p.at_word("let"))
      p.fail(fmt::format("expected 'data' or 'let', found {}", Parser::describe(p.peek())));
    ++p.pos_;
    auto name_tok = p.expect(Tok::Ident, "a binding name");
    if (!names.insert(name_tok.text).second)
      throw ParseError(fmt::format("duplicate name {}", name_tok.text), name_tok.pos);
    p.expect(Tok::Equals);
    if (p.at_word("rel")) {
      Rel r = p.rel();
      check_rel(r, env);
      scope.rels.push_back({name_tok.text, r});
      file.items.push_back(NamedRel{name_tok.text, std::move(r)});
    } else {
      Term t = p.term();
      type_of(t, env);
      scope.terms.push_back({name_tok.text, t});
      file.items.push_back(NamedTerm{name_tok.text, std::move(t)});
    }
  }
  return file;
}

Type parse_type(std::string_view text, const Env &env) {
  Parser p(text, &env, nullptr);
  Type t = p.type();
  p.expect_end();
  return t;
}

Term parse_term(std::string_view text, const Env &env, const Scope &scope) {
  Parser p(text, &env, &scope);
  Term t = p.term();
  p.expect_end();
  type_of(t, env);
  return t;
}

Rel parse_rel(std::string_view text, const Env &env, const Scope &scope) {
  Parser p(text, &env, &scope);
  Rel r = p.rel();
  p.expect_end();
  check_rel(r, env);
  return r;
}

Term parse_fun(std::string_view text, const Env &env, const Scope &scope) {
  Parser p(text, &env, &scope);
  Term t = p.fun();
  p.expect_end();
  type_of(t, env);
  return t;
}

std::string print(const SourceItem &item, PrintOptions opts) {
  return std::visit(
      [&](const auto &x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, DataDecl>) {
          return to_string(x, opts);
        } else {
          return fmt::format("let {} = {}\n", x.name, to_string(x.value, opts));
        }
      },
      item);
}

std::string print(const SourceFile &file, PrintOptions opts) {
  std::string out;
  for (std::size_t i = 0; i < file.items.size(); ++i) {
    if (i) out += '\n';
    out += print(file.items[i], opts);
  }
  return out;
}

}  // namespace gadtparam
