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

#include "gadtparam/term.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

#include "gadtparam/error.hpp"

namespace gadtparam {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

ParseError::ParseError(std::string msg, SourcePos pos)
    : Error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + msg),
      msg_(std::move(msg)),
      pos_(pos) {}

namespace {
std::string join_diags(const std::vector<std::string> &d) {
  std::string out;
  for (const auto &s : d) {
    if (!out.empty()) out += "; ";
    out += s;
  }
  return out;
}
}  // namespace

CheckError::CheckError(std::string msg) : Error(msg), diagnostics_{std::move(msg)} {}
CheckError::CheckError(std::vector<std::string> diagnostics)
    : Error(join_diags(diagnostics)), diagnostics_(std::move(diagnostics)) {}

// ---------------------------------------------------------------- Type

struct Type::Node {
  Kind kind;
  std::string name;
  std::vector<Type> kids;  // Prod/Arrow: two; App: arguments
  std::size_t hash;
  bool closed;
  bool has_app;
};

Type::Type() : Type(unit()) {}

Type Type::var(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->hash = mix(1, std::hash<std::string>{}(name));
  n->name = std::move(name);
  n->closed = false;
  n->has_app = false;
  return Type(std::move(n));
}

Type Type::boolean() {
  static const Type t = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Bool;
    n->hash = 2;
    n->closed = true;
    n->has_app = false;
    return Type(std::shared_ptr<const Node>(std::move(n)));
  }();
  return t;
}

Type Type::unit() {
  static const Type t = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Unit;
    n->hash = 3;
    n->closed = true;
    n->has_app = false;
    return Type(std::shared_ptr<const Node>(std::move(n)));
  }();
  return t;
}

namespace {
std::shared_ptr<Type::Node> compound(Type::Kind kind, std::size_t tag, std::string name,
                                     std::vector<Type> kids) {
  auto n = std::make_shared<Type::Node>();
  n->kind = kind;
  std::size_t h = mix(tag, std::hash<std::string>{}(name));
  bool closed = true;
  bool has_app = kind == Type::Kind::App;
  for (const auto &k : kids) {
    h = mix(h, k.hash());
    closed = closed && k.is_closed();
    has_app = has_app || k.mentions_app();
  }
  n->name = std::move(name);
  n->kids = std::move(kids);
  n->hash = h;
  n->closed = closed;
  n->has_app = has_app;
  return n;
}
}  // namespace

Type Type::prod(Type left, Type right) {
  return Type(compound(Kind::Prod, 4, {}, {std::move(left), std::move(right)}));
}

Type Type::arrow(Type dom, Type cod) {
  return Type(compound(Kind::Arrow, 5, {}, {std::move(dom), std::move(cod)}));
}

Type Type::app(std::string con, std::vector<Type> args) {
  return Type(compound(Kind::App, 6, std::move(con), std::move(args)));
}

Type::Kind Type::kind() const { return node_->kind; }
const std::string &Type::name() const { return node_->name; }
const Type &Type::left() const {
  assert(node_->kids.size() == 2);
  return node_->kids[0];
}
const Type &Type::right() const {
  assert(node_->kids.size() == 2);
  return node_->kids[1];
}
const std::vector<Type> &Type::args() const { return node_->kids; }
bool Type::is_closed() const { return node_->closed; }
bool Type::mentions_app() const { return node_->has_app; }
std::size_t Type::hash() const { return node_->hash; }

void Type::free_vars(std::set<std::string> &out) const {
  if (kind() == Kind::Var) {
    out.insert(name());
    return;
  }
  for (const auto &k : node_->kids) k.free_vars(out);
}

bool Type::mentions_var(const std::string &v) const {
  if (kind() == Kind::Var) return name() == v;
  for (const auto &k : node_->kids)
    if (k.mentions_var(v)) return true;
  return false;
}

int compare(const Type &a, const Type &b) {
  if (a.node_ == b.node_) return 0;
  if (a.kind() != b.kind()) return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
  if (int c = a.node_->name.compare(b.node_->name); c != 0) return c < 0 ? -1 : 1;
  const auto &ka = a.node_->kids;
  const auto &kb = b.node_->kids;
  if (ka.size() != kb.size()) return ka.size() < kb.size() ? -1 : 1;
  for (std::size_t i = 0; i < ka.size(); ++i)
    if (int c = compare(ka[i], kb[i]); c != 0) return c;
  return 0;
}

const Type *lookup(const TypeSubst &s, const std::string &v) {
  for (const auto &[name, ty] : s)
    if (name == v) return &ty;
  return nullptr;
}

Type substitute(const Type &t, const TypeSubst &s) {
  switch (t.kind()) {
    case Type::Kind::Var:
      if (const Type *r = lookup(s, t.name())) return *r;
      return t;
    case Type::Kind::Bool:
    case Type::Kind::Unit:
      return t;
    case Type::Kind::Prod:
      return Type::prod(substitute(t.left(), s), substitute(t.right(), s));
    case Type::Kind::Arrow:
      return Type::arrow(substitute(t.dom(), s), substitute(t.cod(), s));
    case Type::Kind::App: {
      std::vector<Type> args;
      args.reserve(t.args().size());
      for (const auto &a : t.args()) args.push_back(substitute(a, s));
      return Type::app(t.name(), std::move(args));
    }
  }
  return t;
}

// ---------------------------------------------------------------- Term

struct Term::Node {
  Kind kind;
  bool b = false;
  std::string ctor;
  std::vector<Type> types;  // Fun: {dom, cod}; Con: type arguments
  std::vector<Term> kids;   // Pair: two; Con: arguments
  std::vector<Row> table;   // Fun
  std::size_t hash = 0;
};

Term::Term() : Term(unit()) {}

Term Term::boolean(bool b) {
  static const Term t[2] = {
      [] {
        auto n = std::make_shared<Node>();
        n->kind = Kind::Bool;
        n->b = false;
        n->hash = 11;
        return Term(std::shared_ptr<const Node>(std::move(n)));
      }(),
      [] {
        auto n = std::make_shared<Node>();
        n->kind = Kind::Bool;
        n->b = true;
        n->hash = 12;
        return Term(std::shared_ptr<const Node>(std::move(n)));
      }()};
  return t[b ? 1 : 0];
}

Term Term::unit() {
  static const Term t = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Unit;
    n->hash = 13;
    return Term(std::shared_ptr<const Node>(std::move(n)));
  }();
  return t;
}

Term Term::pair(Term first, Term second) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Pair;
  n->hash = mix(mix(14, first.hash()), second.hash());
  n->kids = {std::move(first), std::move(second)};
  return Term(std::move(n));
}

Term Term::fun(Type dom, Type cod, std::vector<Row> table) {
  std::sort(table.begin(), table.end(),
            [](const Row &a, const Row &b) { return compare(a.first, b.first) < 0; });
  for (std::size_t i = 1; i < table.size(); ++i)
    if (table[i - 1].first == table[i].first)
      throw CheckError("function table has a duplicate key");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Fun;
  std::size_t h = mix(mix(15, dom.hash()), cod.hash());
  for (const auto &[k, v] : table) h = mix(mix(h, k.hash()), v.hash());
  n->hash = h;
  n->types = {std::move(dom), std::move(cod)};
  n->table = std::move(table);
  return Term(std::move(n));
}

Term Term::con(std::string ctor, std::vector<Type> type_args, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Con;
  std::size_t h = mix(16, std::hash<std::string>{}(ctor));
  for (const auto &t : type_args) h = mix(h, t.hash());
  for (const auto &a : args) h = mix(h, a.hash());
  n->hash = h;
  n->ctor = std::move(ctor);
  n->types = std::move(type_args);
  n->kids = std::move(args);
  return Term(std::move(n));
}

Term::Kind Term::kind() const { return node_->kind; }
bool Term::as_bool() const {
  assert(kind() == Kind::Bool);
  return node_->b;
}
const Term &Term::first() const {
  assert(kind() == Kind::Pair);
  return node_->kids[0];
}
const Term &Term::second() const {
  assert(kind() == Kind::Pair);
  return node_->kids[1];
}
const Type &Term::dom() const {
  assert(kind() == Kind::Fun);
  return node_->types[0];
}
const Type &Term::cod() const {
  assert(kind() == Kind::Fun);
  return node_->types[1];
}
const std::vector<Term::Row> &Term::table() const { return node_->table; }
const std::string &Term::ctor() const { return node_->ctor; }
const std::vector<Type> &Term::type_args() const { return node_->types; }
const std::vector<Term> &Term::args() const { return node_->kids; }
std::size_t Term::hash() const { return node_->hash; }

std::optional<Term> Term::apply(const Term &x) const {
  assert(kind() == Kind::Fun);
  const auto &t = node_->table;
  auto it = std::lower_bound(t.begin(), t.end(), x,
                             [](const Row &r, const Term &k) { return compare(r.first, k) < 0; });
  if (it == t.end() || !(it->first == x)) return std::nullopt;
  return it->second;
}

int compare(const Term &a, const Term &b) {
  if (a.node_ == b.node_) return 0;
  const auto &na = *a.node_;
  const auto &nb = *b.node_;
  if (na.kind != nb.kind) return static_cast<int>(na.kind) < static_cast<int>(nb.kind) ? -1 : 1;
  switch (na.kind) {
    case Term::Kind::Bool:
      return na.b == nb.b ? 0 : (na.b ? 1 : -1);
    case Term::Kind::Unit:
      return 0;
    case Term::Kind::Pair:
      if (int c = compare(na.kids[0], nb.kids[0]); c != 0) return c;
      return compare(na.kids[1], nb.kids[1]);
    case Term::Kind::Fun: {
      for (int i = 0; i < 2; ++i)
        if (int c = compare(na.types[i], nb.types[i]); c != 0) return c;
      const auto n = std::min(na.table.size(), nb.table.size());
      for (std::size_t i = 0; i < n; ++i) {
        if (int c = compare(na.table[i].first, nb.table[i].first); c != 0) return c;
        if (int c = compare(na.table[i].second, nb.table[i].second); c != 0) return c;
      }
      if (na.table.size() != nb.table.size()) return na.table.size() < nb.table.size() ? -1 : 1;
      return 0;
    }
    case Term::Kind::Con: {
      if (int c = na.ctor.compare(nb.ctor); c != 0) return c < 0 ? -1 : 1;
      if (na.types.size() != nb.types.size()) return na.types.size() < nb.types.size() ? -1 : 1;
      for (std::size_t i = 0; i < na.types.size(); ++i)
        if (int c = compare(na.types[i], nb.types[i]); c != 0) return c;
      if (na.kids.size() != nb.kids.size()) return na.kids.size() < nb.kids.size() ? -1 : 1;
      for (std::size_t i = 0; i < na.kids.size(); ++i)
        if (int c = compare(na.kids[i], nb.kids[i]); c != 0) return c;
      return 0;
    }
  }
  return 0;
}

Term identity_table(const Type &ty, const std::vector<Term> &carrier) {
  std::vector<Term::Row> rows;
  rows.reserve(carrier.size());
  for (const auto &v : carrier) rows.emplace_back(v, v);
  return Term::fun(ty, ty, std::move(rows));
}

Term compose_tables(const Term &g, const Term &f) {
  std::vector<Term::Row> rows;
  rows.reserve(f.table().size());
  for (const auto &[k, v] : f.table()) {
    auto r = g.apply(v);
    if (!r) throw CheckError("cannot compose tables: codomain value outside the outer table");
    rows.emplace_back(k, *r);
  }
  return Term::fun(f.dom(), g.cod(), std::move(rows));
}

}  // namespace gadtparam
