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

#include "gadtparam/kernel.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <functional>
#include <set>

#include "gadtparam/error.hpp"
#include "gadtparam/printer.hpp"

namespace gadtparam {

bool CheckedDecl::is_adt() const {
  return std::all_of(ctors.begin(), ctors.end(),
                     [](const CheckedCtor &c) { return c.variable_return; });
}

const CheckedCtor *CheckedDecl::find(const std::string &ctor) const {
  for (const auto &c : ctors)
    if (c.sig.name == ctor) return &c;
  return nullptr;
}

int Caps::max_rel_bits() const {
  int bits = 0;
  while (bits < 62 && (std::int64_t{1} << (bits + 1)) <= max_rel_enum) ++bits;
  return bits;
}

Env::Env(Caps caps)
    : existential_types_{Type::unit(), Type::boolean()},
      carriers_(std::make_shared<CarrierCache>()) {
  set_caps(caps);
}

void Env::set_caps(const Caps &caps) {
  if (caps.max_carrier <= 0 || caps.max_depth <= 0 || caps.max_rel_enum <= 0)
    throw CheckError("caps must be strictly positive");
  if (caps.max_carrier > kHardCaps.max_carrier || caps.max_depth > kHardCaps.max_depth ||
      caps.max_rel_enum > kHardCaps.max_rel_enum)
    throw CheckError(fmt::format("caps exceed hard limits (carrier {}, depth {}, rel-enum {})",
                                 kHardCaps.max_carrier, kHardCaps.max_depth,
                                 kHardCaps.max_rel_enum));
  caps_ = caps;
  // Carriers depend on the caps only through the errors they raise.
  carriers_ = std::make_shared<CarrierCache>();
}

void Env::add(CheckedDecl decl) {
  if (decls_.count(decl.name()))
    throw CheckError(fmt::format("duplicate declaration {}", decl.name()));
  for (const auto &c : decl.ctors)
    if (auto it = ctor_owner_.find(c.sig.name); it != ctor_owner_.end())
      throw CheckError(
          fmt::format("constructor {} already declared by {}", c.sig.name, it->second));
  for (const auto &c : decl.ctors) ctor_owner_[c.sig.name] = decl.name();
  auto name = decl.name();
  decls_[name] = std::make_shared<const CheckedDecl>(std::move(decl));
}

const CheckedDecl *Env::find_decl(const std::string &name) const {
  auto it = decls_.find(name);
  return it == decls_.end() ? nullptr : it->second.get();
}

const CheckedDecl *Env::owner_of(const std::string &ctor) const {
  auto it = ctor_owner_.find(ctor);
  return it == ctor_owner_.end() ? nullptr : find_decl(it->second);
}

std::vector<std::string> Env::decl_names() const {
  std::vector<std::string> out;
  for (const auto &[k, _] : decls_) out.push_back(k);
  return out;
}

// ---------------------------------------------------------------- kinding

namespace {

struct KindChecker {
  const DataDecl &decl;
  const Env &env;
  std::vector<std::string> diags;

  void report(const CtorSig &c, std::string msg) {
    diags.push_back(fmt::format("constructor {}: {}", c.name, msg));
  }

  // Types allowed anywhere: no App at all.
  void check_plain(const CtorSig &c, const Type &t, const std::set<std::string> &scope,
                   const char *where) {
    switch (t.kind()) {
      case Type::Kind::Var:
        if (!scope.count(t.name())) report(c, fmt::format("unquantified variable {}", t.name()));
        return;
      case Type::Kind::Bool:
      case Type::Kind::Unit:
        return;
      case Type::Kind::Prod:
      case Type::Kind::Arrow:
        check_plain(c, t.left(), scope, where);
        check_plain(c, t.right(), scope, where);
        return;
      case Type::Kind::App:
        if (t.name() == decl.name) {
          report(c, fmt::format("recursive occurrence of {} {} is outside the supported grammar",
                                decl.name, where));
        } else if (env.find_decl(t.name())) {
          report(c, fmt::format("type constructor {} is not supported {}", t.name(), where));
        } else {
          report(c, fmt::format("unknown type constructor {}", t.name()));
        }
        for (const auto &a : t.args()) check_plain(c, a, scope, where);
        return;
    }
  }

  CheckedCtor check_ctor(const CtorSig &c) {
    CheckedCtor out;
    out.sig = c;
    std::set<std::string> scope;
    for (const auto &q : c.quantified)
      if (!scope.insert(q).second) report(c, fmt::format("variable {} quantified twice", q));

    for (const auto &a : c.args) {
      bool rec = a.is(Type::Kind::App) && a.name() == decl.name;
      out.recursive.push_back(rec);
      if (rec) {
        if (static_cast<int>(a.args().size()) != decl.arity)
          report(c, fmt::format("arity mismatch: {} expects {} argument(s), got {}", decl.name,
                                decl.arity, a.args().size()));
        for (const auto &x : a.args()) check_plain(c, x, scope, "inside a recursive argument");
      } else if (a.is(Type::Kind::App) && !env.find_decl(a.name())) {
        report(c, fmt::format("unknown type constructor {}", a.name()));
      } else {
        check_plain(c, a, scope, "nested inside an argument type");
      }
    }

    if (static_cast<int>(c.ret_instance.size()) != decl.arity)
      report(c, fmt::format("arity mismatch: {} expects {} index(es), return instance has {}",
                            decl.name, decl.arity, c.ret_instance.size()));
    std::set<std::string> ret_vars;
    bool all_vars = true;
    for (const auto &r : c.ret_instance) {
      check_plain(c, r, scope, "in a return instance");
      if (r.is(Type::Kind::Var)) {
        if (!ret_vars.insert(r.name()).second) all_vars = false;
      } else {
        all_vars = false;
      }
    }
    std::set<std::string> mentioned;
    for (const auto &r : c.ret_instance) r.free_vars(mentioned);
    for (const auto &q : c.quantified)
      if (!mentioned.count(q)) out.existential.push_back(q);
    out.variable_return = all_vars && ret_vars == scope;
    return out;
  }
};

}  // namespace

CheckedDecl kind_check(const DataDecl &decl, const Env &env) {
  KindChecker kc{decl, env, {}};
  if (decl.arity <= 0) kc.diags.push_back(fmt::format("{}: arity must be positive", decl.name));
  CheckedDecl out;
  out.decl = decl;
  std::set<std::string> names;
  for (const auto &c : decl.ctors) {
    if (!names.insert(c.name).second)
      kc.diags.push_back(fmt::format("duplicate constructor {} in {}", c.name, decl.name));
    out.ctors.push_back(kc.check_ctor(c));
  }
  if (!kc.diags.empty()) throw CheckError(std::move(kc.diags));
  return out;
}

// ---------------------------------------------------------------- carriers

std::int64_t carrier_size(const Type &ty, const Env &env) {
  const auto &caps = env.caps();
  switch (ty.kind()) {
    case Type::Kind::Bool:
      return 2;
    case Type::Kind::Unit:
      return 1;
    case Type::Kind::Prod: {
      auto n = carrier_size(ty.left(), env) * carrier_size(ty.right(), env);
      if (n > caps.max_carrier)
        throw CapError(fmt::format("carrier of {} has {} elements (max_carrier {})",
                                   to_string(ty), n, caps.max_carrier));
      return n;
    }
    case Type::Kind::Arrow: {
      auto d = carrier_size(ty.dom(), env);
      auto c = carrier_size(ty.cod(), env);
      std::int64_t n = 1;
      for (std::int64_t i = 0; i < d; ++i) {
        n *= c;
        if (n > caps.max_rel_enum)
          throw CapError(fmt::format("{} has more than {} tables (max_rel_enum)", to_string(ty),
                                     caps.max_rel_enum));
      }
      return n;
    }
    case Type::Kind::Var:
      throw CheckError(fmt::format("no carrier for open type {}", to_string(ty)));
    case Type::Kind::App:
      throw CheckError(fmt::format("no carrier for data type {}; use enumerate_values",
                                   to_string(ty)));
  }
  return 0;
}

namespace {

std::vector<Term> build_carrier(const Type &ty, const Env &env) {
  carrier_size(ty, env);
  switch (ty.kind()) {
    case Type::Kind::Bool:
      return {Term::boolean(false), Term::boolean(true)};
    case Type::Kind::Unit:
      return {Term::unit()};
    case Type::Kind::Prod: {
      auto l = env.cached_carrier(ty.left());
      auto r = env.cached_carrier(ty.right());
      std::vector<Term> out;
      out.reserve(l->size() * r->size());
      for (const auto &a : *l)
        for (const auto &b : *r) out.push_back(Term::pair(a, b));
      return out;
    }
    case Type::Kind::Arrow: {
      auto d = env.cached_carrier(ty.dom());
      auto c = env.cached_carrier(ty.cod());
      std::vector<Term> out;
      if (c->empty() && !d->empty()) return out;
      // Odometer over codomain indices; first key is most significant so
      // the result is already in term order.
      std::vector<std::size_t> idx(d->size(), 0);
      while (true) {
        std::vector<Term::Row> rows;
        rows.reserve(d->size());
        for (std::size_t i = 0; i < d->size(); ++i) rows.emplace_back((*d)[i], (*c)[idx[i]]);
        out.push_back(Term::fun(ty.dom(), ty.cod(), std::move(rows)));
        std::size_t pos = d->size();
        while (pos > 0) {
          --pos;
          if (++idx[pos] < c->size()) break;
          idx[pos] = 0;
          if (pos == 0) return out;
        }
        if (d->empty()) return out;
      }
    }
    default:
      break;
  }
  return {};
}

}  // namespace

std::shared_ptr<const std::vector<Term>> Env::cached_carrier(const Type &ty) const {
  {
    std::lock_guard<std::mutex> lock(carriers_->mu);
    if (auto it = carriers_->map.find(ty); it != carriers_->map.end()) return it->second;
  }
  auto built = std::make_shared<const std::vector<Term>>(build_carrier(ty, *this));
  std::lock_guard<std::mutex> lock(carriers_->mu);
  return carriers_->map.emplace(ty, std::move(built)).first->second;
}

std::vector<Term> carrier(const Type &ty, const Env &env) {
  if (!ty.is_closed()) throw CheckError(fmt::format("no carrier for open type {}", to_string(ty)));
  return *env.cached_carrier(ty);
}

// ---------------------------------------------------------------- typing

TypeSubst ctor_subst(const CheckedCtor &ctor, const Term &term) {
  TypeSubst s;
  const auto &q = ctor.sig.quantified;
  for (std::size_t i = 0; i < q.size() && i < term.type_args().size(); ++i)
    s.emplace_back(q[i], term.type_args()[i]);
  return s;
}

Type type_of(const Term &term, const Env &env) {
  switch (term.kind()) {
    case Term::Kind::Bool:
      return Type::boolean();
    case Term::Kind::Unit:
      return Type::unit();
    case Term::Kind::Pair:
      return Type::prod(type_of(term.first(), env), type_of(term.second(), env));
    case Term::Kind::Fun: {
      if (!term.dom().is_closed() || !term.cod().is_closed())
        throw CheckError("function table with open type");
      auto keys = env.cached_carrier(term.dom());
      const auto &rows = term.table();
      if (rows.size() != keys->size())
        throw CheckError(fmt::format("function table over {} is not total ({} of {} rows)",
                                     to_string(term.dom()), rows.size(), keys->size()));
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!(rows[i].first == (*keys)[i]))
          throw CheckError(fmt::format("function table over {} has stray key {}",
                                       to_string(term.dom()), to_string(rows[i].first)));
        auto vt = type_of(rows[i].second, env);
        if (!(vt == term.cod()))
          throw CheckError(fmt::format("table value {} has type {}, expected {}",
                                       to_string(rows[i].second), to_string(vt),
                                       to_string(term.cod())));
      }
      return Type::arrow(term.dom(), term.cod());
    }
    case Term::Kind::Con: {
      const CheckedDecl *decl = env.owner_of(term.ctor());
      if (!decl) throw CheckError(fmt::format("unknown constructor {}", term.ctor()));
      const CheckedCtor &c = *decl->find(term.ctor());
      if (term.type_args().size() != c.sig.quantified.size())
        throw CheckError(fmt::format("{} expects {} type argument(s), got {}", term.ctor(),
                                     c.sig.quantified.size(), term.type_args().size()));
      for (const auto &t : term.type_args())
        if (!t.is_closed())
          throw CheckError(fmt::format("{}: type argument {} is not closed", term.ctor(),
                                       to_string(t)));
      if (term.args().size() != c.sig.args.size())
        throw CheckError(fmt::format("{} expects {} argument(s), got {}", term.ctor(),
                                     c.sig.args.size(), term.args().size()));
      auto s = ctor_subst(c, term);
      for (std::size_t i = 0; i < c.sig.args.size(); ++i) {
        auto want = substitute(c.sig.args[i], s);
        auto got = type_of(term.args()[i], env);
        if (!(want == got))
          throw CheckError(fmt::format("argument {} of {}: expected {}, got {}", i + 1,
                                       term.ctor(), to_string(want), to_string(got)));
      }
      std::vector<Type> inst;
      for (const auto &r : c.sig.ret_instance) inst.push_back(substitute(r, s));
      return Type::app(decl->name(), std::move(inst));
    }
  }
  throw CheckError("ill-formed term");
}

bool match_type(const Type &pattern, const Type &closed, TypeSubst &s) {
  switch (pattern.kind()) {
    case Type::Kind::Var:
      if (const Type *b = lookup(s, pattern.name())) return *b == closed;
      s.emplace_back(pattern.name(), closed);
      return true;
    case Type::Kind::Bool:
    case Type::Kind::Unit:
      return pattern.kind() == closed.kind();
    case Type::Kind::Prod:
    case Type::Kind::Arrow:
      return pattern.kind() == closed.kind() && match_type(pattern.left(), closed.left(), s) &&
             match_type(pattern.right(), closed.right(), s);
    case Type::Kind::App:
      if (!closed.is(Type::Kind::App) || closed.name() != pattern.name() ||
          closed.args().size() != pattern.args().size())
        return false;
      for (std::size_t i = 0; i < pattern.args().size(); ++i)
        if (!match_type(pattern.args()[i], closed.args()[i], s)) return false;
      return true;
  }
  return false;
}

// ---------------------------------------------------------------- enumeration

namespace {

struct Enumerator {
  const CheckedDecl &decl;
  const Env &env;
  std::map<std::pair<std::vector<Type>, int>, std::vector<Term>> memo;

  void check_budget(std::size_t n) const {
    if (static_cast<std::int64_t>(n) > env.caps().max_rel_enum)
      throw CapError(fmt::format("enumeration of {} exceeds {} values (max_rel_enum)",
                                 decl.name(), env.caps().max_rel_enum));
  }

  const std::vector<Term> &run(const std::vector<Type> &inst, int depth) {
    auto key = std::make_pair(inst, depth);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::vector<Term> out;
    for (const auto &c : decl.ctors) {
      TypeSubst s;
      bool ok = true;
      for (std::size_t k = 0; k < inst.size() && ok; ++k)
        ok = match_type(c.sig.ret_instance[k], inst[k], s);
      if (!ok) continue;
      bool recursive = std::any_of(c.recursive.begin(), c.recursive.end(), [](bool b) { return b; });
      if (recursive && depth == 0) continue;
      // Variables the return instance leaves open range over the existential universe.
      std::vector<std::string> open;
      for (const auto &q : c.sig.quantified)
        if (!lookup(s, q)) open.push_back(q);
      const auto &universe = env.existential_types();
      std::vector<std::size_t> pick(open.size(), 0);
      if (!open.empty() && universe.empty()) continue;
      while (true) {
        TypeSubst full = s;
        for (std::size_t i = 0; i < open.size(); ++i) full.emplace_back(open[i], universe[pick[i]]);
        emit(c, full, depth, out);
        std::size_t pos = open.size();
        bool done = true;
        while (pos > 0) {
          --pos;
          if (++pick[pos] < universe.size()) {
            done = false;
            break;
          }
          pick[pos] = 0;
        }
        if (done) break;
      }
    }
    return memo.emplace(key, std::move(out)).first->second;
  }

  void emit(const CheckedCtor &c, const TypeSubst &s, int depth, std::vector<Term> &out) {
    std::vector<Type> type_args;
    for (const auto &q : c.sig.quantified) type_args.push_back(*lookup(s, q));
    std::vector<std::vector<Term>> choices;
    for (std::size_t j = 0; j < c.sig.args.size(); ++j) {
      auto t = substitute(c.sig.args[j], s);
      if (c.recursive[j]) {
        choices.push_back(run(t.args(), depth - 1));
      } else {
        choices.push_back(*env.cached_carrier(t));
      }
      if (choices.back().empty()) return;
    }
    std::vector<std::size_t> idx(choices.size(), 0);
    while (true) {
      std::vector<Term> args;
      args.reserve(choices.size());
      for (std::size_t j = 0; j < choices.size(); ++j) args.push_back(choices[j][idx[j]]);
      out.push_back(Term::con(c.sig.name, type_args, std::move(args)));
      check_budget(out.size());
      std::size_t pos = choices.size();
      bool done = true;
      while (pos > 0) {
        --pos;
        if (++idx[pos] < choices[pos].size()) {
          done = false;
          break;
        }
        idx[pos] = 0;
      }
      if (done) return;
    }
  }
};

}  // namespace

std::vector<Term> enumerate_values(const CheckedDecl &decl, const std::vector<Type> &instance,
                                   int depth, const Env &env) {
  if (depth < 0) throw CheckError("enumeration depth must be non-negative");
  if (depth > env.caps().max_depth)
    throw CapError(fmt::format("depth {} exceeds max_depth {}", depth, env.caps().max_depth));
  if (static_cast<int>(instance.size()) != decl.arity())
    throw CheckError(fmt::format("{} expects {} index type(s), got {}", decl.name(), decl.arity(),
                                 instance.size()));
  for (const auto &t : instance)
    if (!t.is_closed()) throw CheckError(fmt::format("instance {} is not closed", to_string(t)));
  Enumerator e{decl, env, {}};
  return e.run(instance, depth);
}

int term_depth(const Term &term, const Env &env) {
  if (!term.is(Term::Kind::Con)) return 0;
  const CheckedDecl *decl = env.owner_of(term.ctor());
  if (!decl) throw CheckError(fmt::format("unknown constructor {}", term.ctor()));
  const CheckedCtor &c = *decl->find(term.ctor());
  int best = -1;
  for (std::size_t j = 0; j < c.recursive.size() && j < term.args().size(); ++j)
    if (c.recursive[j]) best = std::max(best, term_depth(term.args()[j], env));
  return best + 1;
}

}  // namespace gadtparam
