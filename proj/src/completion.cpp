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

#include "gadtparam/completion.hpp"

#include <fmt/format.h>

#include <set>

#include "gadtparam/error.hpp"
#include "gadtparam/printer.hpp"

namespace gadtparam {

namespace {

bool distinct_vars(const std::vector<Type> &inst) {
  std::set<std::string> seen;
  for (const auto &t : inst)
    if (!t.is(Type::Kind::Var) || !seen.insert(t.name()).second) return false;
  return true;
}

Type rename_con(const Type &t, const std::string &from, const std::string &to) {
  switch (t.kind()) {
    case Type::Kind::Var:
    case Type::Kind::Bool:
    case Type::Kind::Unit:
      return t;
    case Type::Kind::Prod:
      return Type::prod(rename_con(t.left(), from, to), rename_con(t.right(), from, to));
    case Type::Kind::Arrow:
      return Type::arrow(rename_con(t.dom(), from, to), rename_con(t.cod(), from, to));
    case Type::Kind::App: {
      std::vector<Type> args;
      for (const auto &a : t.args()) args.push_back(rename_con(a, from, to));
      return Type::app(t.name() == from ? to : t.name(), std::move(args));
    }
  }
  return t;
}

std::string ctor_completed_name(const std::string &c) { return c + "_c"; }

}  // namespace

const CompletedCtor *CompletedDecl::by_original(const std::string &ctor) const {
  for (const auto &m : ctor_map)
    if (m.original == ctor) return &m;
  return nullptr;
}

const CompletedCtor *CompletedDecl::by_completed(const std::string &ctor) const {
  for (const auto &m : ctor_map)
    if (m.completed == ctor) return &m;
  return nullptr;
}

std::string completed_name(const std::string &decl_name) { return decl_name + "_c"; }

CompletedDecl complete(const CheckedDecl &decl, const Env &env) {
  CompletedDecl out;
  out.original = decl;
  DataDecl d;
  d.name = completed_name(decl.name());
  d.arity = decl.arity();
  for (const auto &c : decl.ctors) {
    CtorSig sig;
    sig.name = ctor_completed_name(c.sig.name);
    bool rewrite = !distinct_vars(c.sig.ret_instance);
    sig.quantified = c.sig.quantified;
    if (rewrite) {
      std::set<std::string> used(c.sig.quantified.begin(), c.sig.quantified.end());
      int next = 1;
      std::vector<Type> betas;
      for (int k = 0; k < decl.arity(); ++k) {
        std::string b;
        if (decl.arity() == 1 && !used.count("β")) b = "β";
        while (b.empty() || used.count(b)) b = fmt::format("β{}", next++);
        used.insert(b);
        sig.quantified.push_back(b);
        betas.push_back(Type::var(b));
      }
      for (int k = 0; k < decl.arity(); ++k)
        sig.args.push_back(Type::arrow(c.sig.ret_instance[k], betas[k]));
      sig.ret_instance = std::move(betas);
    } else {
      sig.ret_instance = c.sig.ret_instance;
    }
    for (const auto &a : c.sig.args) sig.args.push_back(rename_con(a, decl.name(), d.name));
    out.ctor_map.push_back({c.sig.name, sig.name, rewrite});
    d.ctors.push_back(std::move(sig));
  }
  out.completed = kind_check(d, env);
  return out;
}

void add_with_completion(Env &env, const CheckedDecl &decl) {
  auto cd = complete(decl, env);
  env.add(decl);
  env.add(cd.completed);
}

std::optional<CompletedDecl> find_completion(const Env &env, const std::string &decl_name) {
  const CheckedDecl *orig = env.find_decl(decl_name);
  if (!orig) return std::nullopt;
  const CheckedDecl *comp = env.find_decl(completed_name(decl_name));
  if (!comp) return std::nullopt;
  auto cd = complete(*orig, env);
  if (!(cd.completed.decl == comp->decl)) return std::nullopt;
  return cd;
}

Term embed(const CompletedDecl &cd, const Term &x, const Env &env) {
  if (!x.is(Term::Kind::Con)) throw CheckError("ι expects a constructor term");
  const CheckedCtor *c = cd.original.find(x.ctor());
  const CompletedCtor *m = cd.by_original(x.ctor());
  if (!c || !m)
    throw CheckError(fmt::format("{} is not a constructor of {}", x.ctor(), cd.original.name()));
  std::vector<Type> targs = x.type_args();
  std::vector<Term> args;
  if (m->rewritten) {
    auto s = ctor_subst(*c, x);
    for (const auto &psi : c->sig.ret_instance) {
      auto inst = substitute(psi, s);
      targs.push_back(inst);
      args.push_back(identity_table(inst, carrier(inst, env)));
    }
  }
  for (std::size_t j = 0; j < x.args().size(); ++j)
    args.push_back(c->recursive[j] ? embed(cd, x.args()[j], env) : x.args()[j]);
  return Term::con(m->completed, std::move(targs), std::move(args));
}

std::optional<Term> unembed(const CompletedDecl &cd, const Term &x, const Env &env) {
  if (!x.is(Term::Kind::Con)) return std::nullopt;
  const CompletedCtor *m = cd.by_completed(x.ctor());
  if (!m) return std::nullopt;
  const CheckedCtor *c = cd.original.find(m->original);
  std::size_t nq = c->sig.quantified.size();
  std::size_t skip = 0;
  std::vector<Type> targs(x.type_args().begin(), x.type_args().begin() + nq);
  if (m->rewritten) {
    skip = c->sig.ret_instance.size();
    TypeSubst s;
    for (std::size_t i = 0; i < nq; ++i) s.emplace_back(c->sig.quantified[i], targs[i]);
    for (std::size_t k = 0; k < skip; ++k) {
      auto inst = substitute(c->sig.ret_instance[k], s);
      if (!(x.type_args()[nq + k] == inst)) return std::nullopt;
      if (!(x.args()[k] == identity_table(inst, carrier(inst, env)))) return std::nullopt;
    }
  }
  std::vector<Term> args;
  for (std::size_t j = 0; j < c->sig.args.size(); ++j) {
    const Term &a = x.args()[skip + j];
    if (c->recursive[j]) {
      auto u = unembed(cd, a, env);
      if (!u) return std::nullopt;
      args.push_back(std::move(*u));
    } else {
      args.push_back(a);
    }
  }
  return Term::con(m->original, std::move(targs), std::move(args));
}

namespace {

// nullopt stands for the identity on that index.
using FunVec = std::vector<std::optional<Term>>;

struct Mapper {
  const CompletedDecl &cd;
  const Env &env;

  static std::optional<std::size_t> index_of(const std::vector<Type> &ret, const std::string &v) {
    for (std::size_t k = 0; k < ret.size(); ++k)
      if (ret[k].is(Type::Kind::Var) && ret[k].name() == v) return k;
    return std::nullopt;
  }

  static bool mentions_any(const Type &t, const std::vector<Type> &ret) {
    for (const auto &r : ret)
      if (t.mentions_var(r.name())) return true;
    return false;
  }

  Term at_type(const Type &ty, const Term &v, const CheckedCtor &c, const FunVec &fs) {
    const auto &ret = c.sig.ret_instance;
    if (!mentions_any(ty, ret)) return v;
    switch (ty.kind()) {
      case Type::Kind::Var: {
        const auto &f = fs[*index_of(ret, ty.name())];
        if (!f) return v;
        auto r = f->apply(v);
        if (!r)
          throw CheckError(fmt::format("value {} outside the domain of the mapped function",
                                       to_string(v)));
        return *r;
      }
      case Type::Kind::Prod:
        return Term::pair(at_type(ty.left(), v.first(), c, fs),
                          at_type(ty.right(), v.second(), c, fs));
      case Type::Kind::App: {
        FunVec inner;
        for (const auto &a : ty.args()) {
          if (!mentions_any(a, ret)) {
            inner.push_back(std::nullopt);
          } else if (a.is(Type::Kind::Var)) {
            inner.push_back(fs[*index_of(ret, a.name())]);
          } else {
            throw Error(fmt::format("map over {}: constructor {} has an unsupported position {}",
                                    cd.completed.name(), c.sig.name, to_string(ty)));
          }
        }
        return run(v, inner);
      }
      default:
        throw Error(fmt::format("map over {}: constructor {} has an unsupported position {}",
                                cd.completed.name(), c.sig.name, to_string(ty)));
    }
  }

  Term run(const Term &x, const FunVec &fs) {
    if (!x.is(Term::Kind::Con)) throw CheckError("map expects a constructor term");
    const CompletedCtor *m = cd.by_completed(x.ctor());
    if (!m)
      throw CheckError(
          fmt::format("{} is not a constructor of {}", x.ctor(), cd.completed.name()));
    const CheckedCtor &c = *cd.completed.find(x.ctor());
    TypeSubst s = ctor_subst(c, x);
    std::vector<Type> targs = x.type_args();
    const auto &ret = c.sig.ret_instance;
    for (std::size_t k = 0; k < ret.size(); ++k) {
      if (!fs[k]) continue;
      auto have = substitute(ret[k], s);
      if (!(fs[k]->dom() == have))
        throw CheckError(fmt::format("map: function domain {} does not match index {}",
                                     to_string(fs[k]->dom()), to_string(have)));
      for (std::size_t q = 0; q < targs.size(); ++q)
        if (c.sig.quantified[q] == ret[k].name()) targs[q] = fs[k]->cod();
    }
    std::vector<Term> args;
    std::size_t skip = 0;
    if (m->rewritten) {
      skip = ret.size();
      for (std::size_t k = 0; k < skip; ++k)
        args.push_back(fs[k] ? compose_tables(*fs[k], x.args()[k]) : x.args()[k]);
    }
    for (std::size_t j = skip; j < x.args().size(); ++j)
      args.push_back(at_type(c.sig.args[j], x.args()[j], c, fs));
    return Term::con(x.ctor(), std::move(targs), std::move(args));
  }
};

}  // namespace

Term map_completion(const CompletedDecl &cd, const std::vector<Term> &fs, const Term &x,
                    const Env &env) {
  if (static_cast<int>(fs.size()) != cd.completed.arity())
    throw CheckError(fmt::format("map over {} needs {} function(s), got {}",
                                 cd.completed.name(), cd.completed.arity(), fs.size()));
  FunVec v;
  for (const auto &f : fs) {
    if (!f.is(Term::Kind::Fun)) throw CheckError("map expects function tables");
    v.emplace_back(f);
  }
  Mapper mp{cd, env};
  return mp.run(x, v);
}

}  // namespace gadtparam
