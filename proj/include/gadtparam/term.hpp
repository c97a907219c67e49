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

#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace gadtparam {

// Object-language type expressions. Immutable; copies share structure.
class Type {
 public:
  enum class Kind { Var, Bool, Unit, Prod, Arrow, App };

  Type();  // Unit

  static Type var(std::string name);
  static Type boolean();
  static Type unit();
  static Type prod(Type left, Type right);
  static Type arrow(Type dom, Type cod);
  static Type app(std::string con, std::vector<Type> args);

  Kind kind() const;
  bool is(Kind k) const { return kind() == k; }

  // Var name or App constructor name.
  const std::string &name() const;
  // Prod components; for Arrow, left() is the domain and right() the codomain.
  const Type &left() const;
  const Type &right() const;
  const Type &dom() const { return left(); }
  const Type &cod() const { return right(); }
  const std::vector<Type> &args() const;

  bool is_closed() const;
  bool mentions_app() const;
  void free_vars(std::set<std::string> &out) const;
  bool mentions_var(const std::string &v) const;

  std::size_t hash() const;

  struct Node;

  friend int compare(const Type &a, const Type &b);
  friend bool operator==(const Type &a, const Type &b) { return compare(a, b) == 0; }
  friend std::strong_ordering operator<=>(const Type &a, const Type &b) {
    return compare(a, b) <=> 0;
  }

 private:
  explicit Type(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

using TypeSubst = std::vector<std::pair<std::string, Type>>;

// Replaces variables bound in `s`; unbound variables are left in place.
Type substitute(const Type &t, const TypeSubst &s);
const Type *lookup(const TypeSubst &s, const std::string &v);

// Object-language values. Finite functions are stored as tables sorted by
// key, so structural equality coincides with extensional equality.
class Term {
 public:
  enum class Kind { Bool, Unit, Pair, Fun, Con };
  using Row = std::pair<Term, Term>;

  Term();  // unit

  static Term boolean(bool b);
  static Term unit();
  static Term pair(Term first, Term second);
  static Term fun(Type dom, Type cod, std::vector<Row> table);
  static Term con(std::string ctor, std::vector<Type> type_args, std::vector<Term> args);

  Kind kind() const;
  bool is(Kind k) const { return kind() == k; }

  bool as_bool() const;
  const Term &first() const;
  const Term &second() const;
  const Type &dom() const;
  const Type &cod() const;
  const std::vector<Row> &table() const;
  // Table lookup; nullopt when the key is absent.
  std::optional<Term> apply(const Term &x) const;
  const std::string &ctor() const;
  const std::vector<Type> &type_args() const;
  const std::vector<Term> &args() const;

  std::size_t hash() const;
  bool same_node(const Term &o) const { return node_ == o.node_; }

  friend int compare(const Term &a, const Term &b);
  friend bool operator==(const Term &a, const Term &b) {
    return a.node_ == b.node_ || compare(a, b) == 0;
  }
  friend std::strong_ordering operator<=>(const Term &a, const Term &b) {
    return compare(a, b) <=> 0;
  }

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Identity table over an explicit carrier.
Term identity_table(const Type &ty, const std::vector<Term> &carrier);
// g ∘ f as tables; f's codomain rows must be keys of g.
Term compose_tables(const Term &g, const Term &f);

}  // namespace gadtparam

template <>
struct std::hash<gadtparam::Type> {
  std::size_t operator()(const gadtparam::Type &t) const { return t.hash(); }
};
template <>
struct std::hash<gadtparam::Term> {
  std::size_t operator()(const gadtparam::Term &t) const { return t.hash(); }
};
