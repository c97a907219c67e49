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

#include "gadtparam/printer.hpp"

#include <fmt/format.h>

#include "gadtparam/relations.hpp"

namespace gadtparam {

namespace {

struct Glyphs {
  const char *arrow, *times, *forall;
};

Glyphs glyphs(PrintOptions o) {
  if (o.ascii) return {"->", "*", "forall"};
  return {"→", "×", "∀"};
}

// Precedence: 0 arrow, 1 product, 2 application argument.
void print_type(std::string &out, const Type &t, int prec, PrintOptions o) {
  const auto g = glyphs(o);
  switch (t.kind()) {
    case Type::Kind::Var:
      out += t.name();
      return;
    case Type::Kind::Bool:
      out += "Bool";
      return;
    case Type::Kind::Unit:
      out += "Unit";
      return;
    case Type::Kind::Arrow:
      if (prec > 0) out += '(';
      print_type(out, t.dom(), 1, o);
      out += fmt::format(" {} ", g.arrow);
      print_type(out, t.cod(), 0, o);
      if (prec > 0) out += ')';
      return;
    case Type::Kind::Prod:
      if (prec > 1) out += '(';
      print_type(out, t.left(), 2, o);
      out += fmt::format(" {} ", g.times);
      print_type(out, t.right(), 1, o);
      if (prec > 1) out += ')';
      return;
    case Type::Kind::App: {
      bool parens = prec > 1 && !t.args().empty();
      if (parens) out += '(';
      out += t.name();
      for (const auto &a : t.args()) {
        out += ' ';
        print_type(out, a, 2, o);
      }
      if (parens) out += ')';
      return;
    }
  }
}

void print_term(std::string &out, const Term &t, bool atom, PrintOptions o) {
  switch (t.kind()) {
    case Term::Kind::Bool:
      out += t.as_bool() ? "true" : "false";
      return;
    case Term::Kind::Unit:
      out += "unit";
      return;
    case Term::Kind::Pair:
      out += '(';
      print_term(out, t.first(), false, o);
      out += ", ";
      print_term(out, t.second(), false, o);
      out += ')';
      return;
    case Term::Kind::Fun: {
      out += "fun ";
      out += to_string_atom(t.dom(), o);
      out += fmt::format(" {} ", glyphs(o).arrow);
      out += to_string_atom(t.cod(), o);
      out += " {";
      bool first = true;
      for (const auto &[k, v] : t.table()) {
        out += first ? " " : "; ";
        first = false;
        print_term(out, k, false, o);
        out += " => ";
        print_term(out, v, false, o);
      }
      out += " }";
      return;
    }
    case Term::Kind::Con: {
      bool parens = atom && !t.args().empty();
      if (parens) out += '(';
      out += t.ctor();
      out += " [";
      for (std::size_t i = 0; i < t.type_args().size(); ++i) {
        if (i) out += ", ";
        print_type(out, t.type_args()[i], 0, o);
      }
      out += ']';
      for (const auto &a : t.args()) {
        out += ' ';
        print_term(out, a, true, o);
      }
      if (parens) out += ')';
      return;
    }
  }
}

}  // namespace

std::string to_string(const Type &ty, PrintOptions opts) {
  std::string out;
  print_type(out, ty, 0, opts);
  return out;
}

std::string to_string_atom(const Type &ty, PrintOptions opts) {
  std::string out;
  print_type(out, ty, 2, opts);
  return out;
}

std::string to_string(const Term &term, PrintOptions opts) {
  std::string out;
  print_term(out, term, false, opts);
  return out;
}

std::string to_string(const CtorSig &c, const std::string &decl_name, PrintOptions opts) {
  const auto g = glyphs(opts);
  std::string out = fmt::format("{} : {}{{", c.name, g.forall);
  for (std::size_t i = 0; i < c.quantified.size(); ++i) {
    if (i) out += ' ';
    out += c.quantified[i];
  }
  out += '}';
  for (const auto &a : c.args) {
    out += fmt::format(" {} ", g.arrow);
    print_type(out, a, 1, opts);
  }
  out += fmt::format(" {} ", g.arrow);
  print_type(out, Type::app(decl_name, c.ret_instance), 0, opts);
  return out;
}

std::string to_string(const DataDecl &decl, PrintOptions opts) {
  const auto g = glyphs(opts);
  std::string out = fmt::format("data {} :", decl.name);
  for (int i = 0; i < decl.arity; ++i) out += fmt::format(" Set {}", g.arrow);
  out += " Set where\n";
  for (const auto &c : decl.ctors) {
    out += "  ";
    out += to_string(c, decl.name, opts);
    out += '\n';
  }
  return out;
}

std::string to_string(const Rel &rel, PrintOptions opts) {
  std::string out = fmt::format("rel {} {} {{", to_string_atom(rel.src(), opts),
                                to_string_atom(rel.tgt(), opts));
  bool first = true;
  for (const auto &[a, b] : rel.pairs()) {
    out += first ? " " : ", ";
    first = false;
    out += '(';
    print_term(out, a, false, opts);
    out += ", ";
    print_term(out, b, false, opts);
    out += ')';
  }
  out += " }";
  return out;
}

}  // namespace gadtparam
