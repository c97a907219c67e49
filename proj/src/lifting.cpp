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

#include "gadtparam/lifting.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "gadtparam/error.hpp"

namespace gadtparam {

const char *to_string(LiftMode m) { return m == LiftMode::Naive ? "naive" : "completion"; }

const char *to_string(Verdict v) {
  switch (v) {
    case Verdict::Related: return "Related";
    case Verdict::NotRelated: return "NotRelated";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::optional<LiftMode> parse_mode(const std::string &s) {
  if (s == "naive") return LiftMode::Naive;
  if (s == "completion") return LiftMode::Completion;
  return std::nullopt;
}

namespace {

std::size_t first_codepoint_len(const std::string &s) {
  if (s.empty()) return 0;
  unsigned char c = s[0];
  std::size_t n = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 1;
  return std::min(n, s.size());
}

std::string rule_name(const std::string &ctor) {
  auto n = first_codepoint_len(ctor);
  return ctor.substr(0, n) + "\xCC\x82" + ctor.substr(n) + "lift";
}

std::string family_name(const std::string &decl) { return decl + "lift"; }

std::vector<std::string> relation_names(const std::vector<std::string> &vars) {
  std::vector<std::string> out;
  std::set<std::string> used;
  auto fresh = [](const std::string &v) { return v.rfind("β", 0) == 0; };
  auto betas = std::count_if(vars.begin(), vars.end(), fresh);
  for (const auto &v : vars) {
    std::string n = "R" + v.substr(first_codepoint_len(v));
    if (betas == 1 && fresh(v)) n = "R";
    while (used.count(n)) n += "'";
    used.insert(n);
    out.push_back(n);
  }
  return out;
}

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

bool is_identity(const Term &f) {
  if (!f.is(Term::Kind::Fun) || !(f.dom() == f.cod())) return false;
  for (const auto &[k, v] : f.table())
    if (!(k == v)) return false;
  return true;
}

}  // namespace

// ---------------------------------------------------------------- semantics

Rel materialize(const Type &pattern, const std::map<std::string, Rel> &rho, const TypeSubst &sx,
                const TypeSubst &sy, const Env &env) {
  switch (pattern.kind()) {
    case Type::Kind::Var: {
      auto it = rho.find(pattern.name());
      if (it == rho.end())
        throw Error(fmt::format("no relation chosen for {}", pattern.name()));
      return it->second;
    }
    case Type::Kind::Bool:
    case Type::Kind::Unit:
      return eq_rel(pattern, env);
    case Type::Kind::Prod:
      return product_rel(materialize(pattern.left(), rho, sx, sy, env),
                         materialize(pattern.right(), rho, sx, sy, env));
    case Type::Kind::Arrow: {
      auto a = substitute(pattern, sx);
      auto b = substitute(pattern, sy);
      auto fa = env.cached_carrier(a);
      auto fb = env.cached_carrier(b);
      std::vector<Rel::Pair> pairs;
      for (const auto &f : *fa)
        for (const auto &g : *fb)
          if (relate_type(pattern, rho, f, g, env)) pairs.emplace_back(f, g);
      return Rel(a, b, std::move(pairs));
    }
    case Type::Kind::App:
      break;
  }
  throw Error(fmt::format("cannot interpret {} as a relation", to_string(pattern)));
}

bool relate_type(const Type &pattern, const std::map<std::string, Rel> &rho, const Term &a,
                 const Term &b, const Env &env) {
  switch (pattern.kind()) {
    case Type::Kind::Var: {
      auto it = rho.find(pattern.name());
      if (it == rho.end())
        throw Error(fmt::format("no relation chosen for {}", pattern.name()));
      return it->second.contains(a, b);
    }
    case Type::Kind::Bool:
    case Type::Kind::Unit:
      return a == b;
    case Type::Kind::Prod:
      return relate_type(pattern.left(), rho, a.first(), b.first(), env) &&
             relate_type(pattern.right(), rho, a.second(), b.second(), env);
    case Type::Kind::Arrow: {
      auto da = env.cached_carrier(a.dom());
      auto db = env.cached_carrier(b.dom());
      for (const auto &p : *da)
        for (const auto &q : *db)
          if (relate_type(pattern.dom(), rho, p, q, env)) {
            auto fp = a.apply(p);
            auto gq = b.apply(q);
            if (!fp || !gq || !relate_type(pattern.cod(), rho, *fp, *gq, env)) return false;
          }
      return true;
    }
    case Type::Kind::App:
      break;
  }
  throw Error(fmt::format("cannot interpret {} as a relation", to_string(pattern)));
}

// ---------------------------------------------------------------- rules

LiftRuleSet derive_rules(const CheckedDecl &decl, LiftMode mode, const Env &env) {
  LiftRuleSet rs;
  rs.mode = mode;
  CheckedDecl rules = mode == LiftMode::Naive ? decl : complete(decl, env).completed;
  rs.decl = rules.name();
  rs.family = family_name(rules.name());
  for (const auto &c : rules.ctors) {
    LiftRule r;
    r.ctor = c.sig.name;
    r.name = rule_name(c.sig.name);
    r.vars = c.sig.quantified;
    r.rel_names = relation_names(r.vars);
    r.args = c.sig.args;
    r.recursive = c.recursive;
    r.conclusion = c.sig.ret_instance;
    rs.rules.push_back(std::move(r));
  }
  return rs;
}

namespace {

struct Glyph {
  const char *times, *arrow, *eq;
};
Glyph glyph(PrintOptions o) {
  return o.ascii ? Glyph{"*^", "->^", "Eq_"} : Glyph{"×̂", "→̂", "Eq_"};
}

void lift_str(std::string &out, const Type &t, const LiftRule &r, int prec, PrintOptions o) {
  auto g = glyph(o);
  switch (t.kind()) {
    case Type::Kind::Var: {
      auto it = std::find(r.vars.begin(), r.vars.end(), t.name());
      out += it == r.vars.end() ? t.name() : r.rel_names[it - r.vars.begin()];
      return;
    }
    case Type::Kind::Bool:
      out += std::string(g.eq) + "Bool";
      return;
    case Type::Kind::Unit:
      out += std::string(g.eq) + "Unit";
      return;
    case Type::Kind::Prod:
      if (prec > 1) out += '(';
      lift_str(out, t.left(), r, 2, o);
      out += fmt::format(" {} ", g.times);
      lift_str(out, t.right(), r, 1, o);
      if (prec > 1) out += ')';
      return;
    case Type::Kind::Arrow:
      if (prec > 0) out += '(';
      lift_str(out, t.dom(), r, 1, o);
      out += fmt::format(" {} ", g.arrow);
      lift_str(out, t.cod(), r, 0, o);
      if (prec > 0) out += ')';
      return;
    case Type::Kind::App:
      if (prec > 1) out += '(';
      out += family_name(t.name());
      for (const auto &a : t.args()) {
        out += ' ';
        lift_str(out, a, r, 2, o);
      }
      if (prec > 1) out += ')';
      return;
  }
}

std::string sub(const char *base, std::size_t i, PrintOptions o) {
  static const char *digits[] = {"₀", "₁", "₂", "₃", "₄", "₅", "₆", "₇", "₈", "₉"};
  std::string n = std::to_string(i);
  if (o.ascii) return base + n;
  std::string out = base;
  for (char ch : n) out += digits[ch - '0'];
  return out;
}

std::size_t width(const std::string &s) {
  std::size_t w = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    unsigned char c = s[i];
    if ((c & 0xC0) == 0x80) continue;
    // combining circumflex
    if (c == 0xCC && i + 1 < s.size() && static_cast<unsigned char>(s[i + 1]) == 0x82) continue;
    ++w;
  }
  return w;
}

}  // namespace

std::string print_rules(const LiftRuleSet &rs, PrintOptions o) {
  std::string out = fmt::format("{} ({} mode)\n", rs.family, to_string(rs.mode));
  for (const auto &r : rs.rules) {
    std::vector<std::string> premises;
    for (std::size_t j = 0; j < r.args.size(); ++j) {
      std::string p;
      lift_str(p, r.args[j], r, r.args[j].is(Type::Kind::App) ? 0 : 2, o);
      premises.push_back(fmt::format("{} {} {}", p, sub("x", j + 1, o), sub("y", j + 1, o)));
    }
    std::string prem;
    for (const auto &p : premises) prem += (prem.empty() ? "" : "    ") + p;
    auto side = [&](const char *v) {
      if (r.args.empty()) return r.ctor;
      std::string s = "(" + r.ctor;
      for (std::size_t j = 0; j < r.args.size(); ++j) s += " " + sub(v, j + 1, o);
      return s + ")";
    };
    std::string concl = rs.family;
    for (const auto &psi : r.conclusion) {
      concl += ' ';
      lift_str(concl, psi, r, 2, o);
    }
    concl += " " + side("x") + " " + side("y");
    std::size_t w = std::max(width(prem), width(concl));
    std::string bar;
    for (std::size_t i = 0; i < w; ++i) bar += o.ascii ? "-" : "─";
    out += '\n';
    if (!prem.empty()) out += "  " + prem + "\n";
    out += fmt::format("  {} {}\n  {}\n", bar, r.name, concl);
  }
  return out;
}

// ---------------------------------------------------------------- engine

namespace {

enum class Polarity { None, Neg, Pos, Mixed };

void polarity_of(const Type &t, const std::string &v, bool positive, bool &neg, bool &pos,
                 bool &app) {
  switch (t.kind()) {
    case Type::Kind::Var:
      if (t.name() == v) (positive ? pos : neg) = true;
      return;
    case Type::Kind::Bool:
    case Type::Kind::Unit:
      return;
    case Type::Kind::Prod:
      polarity_of(t.left(), v, positive, neg, pos, app);
      polarity_of(t.right(), v, positive, neg, pos, app);
      return;
    case Type::Kind::Arrow:
      polarity_of(t.dom(), v, !positive, neg, pos, app);
      polarity_of(t.cod(), v, positive, neg, pos, app);
      return;
    case Type::Kind::App:
      if (t.mentions_var(v)) app = true;
      return;
  }
}

struct CtorInfo {
  const CheckedCtor *c = nullptr;
  std::vector<std::string> forced;  // per index: variable name or empty
  std::vector<std::string> pattern_vars;
  std::vector<std::string> evars;
  std::vector<int> fixed_args;               // premises with no existential variable
  std::vector<std::vector<int>> solo_args;   // per evar
  std::vector<int> joint_args;
  std::vector<std::vector<int>> arg_evars;   // per arg
  std::vector<Polarity> polarity;            // per evar, over joint premises
  std::vector<std::vector<std::string>> solo_fixed;  // per evar: non-existential vars its solo premises read
};

CtorInfo analyse(const CheckedCtor &c) {
  CtorInfo ci;
  ci.c = &c;
  std::set<std::string> in_ret, forced;
  for (const auto &psi : c.sig.ret_instance) {
    psi.free_vars(in_ret);
    if (psi.is(Type::Kind::Var) && !forced.count(psi.name())) {
      forced.insert(psi.name());
      ci.forced.push_back(psi.name());
    } else {
      ci.forced.push_back({});
    }
  }
  for (const auto &q : c.sig.quantified) {
    if (!in_ret.count(q)) {
      ci.evars.push_back(q);
    } else if (!forced.count(q)) {
      ci.pattern_vars.push_back(q);
    }
  }
  ci.solo_args.resize(ci.evars.size());
  ci.solo_fixed.resize(ci.evars.size());
  for (std::size_t j = 0; j < c.sig.args.size(); ++j) {
    std::vector<int> ev;
    for (std::size_t e = 0; e < ci.evars.size(); ++e)
      if (c.sig.args[j].mentions_var(ci.evars[e])) ev.push_back(static_cast<int>(e));
    ci.arg_evars.push_back(ev);
    if (ev.empty()) {
      ci.fixed_args.push_back(static_cast<int>(j));
    } else if (ev.size() == 1) {
      ci.solo_args[ev[0]].push_back(static_cast<int>(j));
      std::set<std::string> fv;
      c.sig.args[j].free_vars(fv);
      for (const auto &v : fv)
        if (v != ci.evars[ev[0]]) ci.solo_fixed[ev[0]].push_back(v);
    } else {
      ci.joint_args.push_back(static_cast<int>(j));
    }
  }
  for (auto &sf : ci.solo_fixed) {
    std::sort(sf.begin(), sf.end());
    sf.erase(std::unique(sf.begin(), sf.end()), sf.end());
  }
  for (const auto &e : ci.evars) {
    bool neg = false, pos = false, app = false;
    for (int j : ci.joint_args) polarity_of(c.sig.args[j], e, true, neg, pos, app);
    ci.polarity.push_back(app || (neg && pos) ? Polarity::Mixed
                          : neg                ? Polarity::Neg
                          : pos                ? Polarity::Pos
                                               : Polarity::None);
  }
  return ci;
}

struct MemoKey {
  Term x, y;
  std::vector<Rel> rels;
  std::size_t h;
  MemoKey(Term x_, Term y_, std::vector<Rel> r) : x(std::move(x_)), y(std::move(y_)), rels(std::move(r)) {
    h = mix(x.hash(), y.hash());
    for (const auto &q : rels) h = mix(h, q.hash());
  }
  bool operator==(const MemoKey &o) const { return h == o.h && x == o.x && y == o.y && rels == o.rels; }
};
struct MemoHash {
  std::size_t operator()(const MemoKey &k) const { return k.h; }
};

struct PreKey {
  Term x, y;
  std::string var;
  std::vector<Rel> fixed;
  std::size_t h;
  PreKey(Term x_, Term y_, std::string v, std::vector<Rel> f)
      : x(std::move(x_)), y(std::move(y_)), var(std::move(v)), fixed(std::move(f)) {
    h = mix(mix(x.hash(), y.hash()), std::hash<std::string>{}(var));
    for (const auto &q : fixed) h = mix(h, q.hash());
  }
  bool operator==(const PreKey &o) const {
    return h == o.h && x == o.x && y == o.y && var == o.var && fixed == o.fixed;
  }
};
struct PreHash {
  std::size_t operator()(const PreKey &k) const { return k.h; }
};

struct Candidates {
  std::vector<Rel> rels;
  bool incomplete = false;
};

struct RelsHash {
  std::size_t operator()(const std::vector<Rel> &v) const {
    std::size_t h = v.size();
    for (const auto &r : v) h = mix(h, r.hash());
    return h;
  }
};

struct PatternTable {
  bool inconclusive = false;
  std::unordered_map<std::vector<Rel>, std::vector<std::vector<Rel>>, RelsHash> by_image;
};

struct PatternKey {
  std::string ctor;
  std::vector<Type> types;
  std::vector<Rel> forced;
  std::size_t h;
  PatternKey(std::string c, std::vector<Type> t, std::vector<Rel> f)
      : ctor(std::move(c)), types(std::move(t)), forced(std::move(f)) {
    h = mix(std::hash<std::string>{}(ctor), RelsHash{}(forced));
    for (const auto &ty : types) h = mix(h, ty.hash());
  }
  bool operator==(const PatternKey &o) const {
    return h == o.h && ctor == o.ctor && types == o.types && forced == o.forced;
  }
};
struct PatternHash {
  std::size_t operator()(const PatternKey &k) const { return k.h; }
};

constexpr std::size_t kMemoLimit = std::size_t{1} << 21;

}  // namespace

struct Lifter::Impl {
  const Env &env;
  LiftMode mode;
  CheckedDecl original;
  std::optional<CompletedDecl> cd;
  const CheckedDecl *rules = nullptr;
  std::string note;

  std::map<std::string, CtorInfo> infos;
  std::unordered_map<MemoKey, Verdict, MemoHash> memo;
  std::unordered_map<PreKey, std::shared_ptr<const Candidates>, PreHash> pre;
  std::map<std::pair<Type, Type>, std::shared_ptr<const RelSpace>> spaces;
  std::unordered_map<PatternKey, std::shared_ptr<const PatternTable>, PatternHash> patterns;

  Impl(const CheckedDecl &decl, LiftMode m, const Env &e) : env(e), mode(m), original(decl) {
    if (mode == LiftMode::Completion) {
      cd = complete(decl, env);
      rules = &cd->completed;
    } else {
      rules = &original;
    }
    for (const auto &c : rules->ctors) infos.emplace(c.sig.name, analyse(c));
  }

  const CtorInfo &info(const std::string &ctor) const {
    auto it = infos.find(ctor);
    if (it == infos.end())
      throw CheckError(fmt::format("{} is not a constructor of {}", ctor, rules->name()));
    return it->second;
  }

  const RelSpace &space(const Type &a, const Type &b) {
    auto key = std::make_pair(a, b);
    auto it = spaces.find(key);
    if (it == spaces.end())
      it = spaces.emplace(key, std::make_shared<const RelSpace>(a, b, env)).first;
    return *it->second;
  }

  Verdict premise(const CtorInfo &ci, int j, const Term &x, const Term &y, const TypeSubst &sx,
                  const TypeSubst &sy, const std::map<std::string, Rel> &rho) {
    const Type &phi = ci.c->sig.args[j];
    if (ci.c->recursive[j]) {
      std::vector<Rel> sub;
      for (const auto &t : phi.args()) sub.push_back(materialize(t, rho, sx, sy, env));
      return solve(x.args()[j], y.args()[j], sub, nullptr);
    }
    return relate_type(phi, rho, x.args()[j], y.args()[j], env) ? Verdict::Related
                                                                 : Verdict::NotRelated;
  }

  // All listed premises; Inconclusive dominates NotRelated only if nothing failed outright.
  Verdict premises(const CtorInfo &ci, const std::vector<int> &js, const Term &x, const Term &y,
                   const TypeSubst &sx, const TypeSubst &sy,
                   const std::map<std::string, Rel> &rho) {
    bool unknown = false;
    for (int j : js) {
      auto v = premise(ci, j, x, y, sx, sy, rho);
      if (v == Verdict::NotRelated) return v;
      if (v == Verdict::Inconclusive) unknown = true;
    }
    return unknown ? Verdict::Inconclusive : Verdict::Related;
  }

  using Assign = std::map<std::string, Rel>;

  static std::vector<Assign> merge_all(const std::vector<Assign> &a, const std::vector<Assign> &b) {
    std::vector<Assign> out;
    for (const auto &l : a)
      for (const auto &r : b) {
        Assign m = l;
        bool ok = true;
        for (const auto &[v, rel] : r) {
          auto [it, fresh] = m.emplace(v, rel);
          if (!fresh && !(it->second == rel)) {
            ok = false;
            break;
          }
        }
        if (ok) out.push_back(std::move(m));
      }
    return out;
  }

  // Assignments under which p denotes exactly r; variables left out are
  // unconstrained. nullopt outside Var, ×, Bool and Unit.
  std::optional<std::vector<Assign>> decompose(const Type &p, const Rel &r,
                                               const std::map<std::string, Rel> &fixed) {
    switch (p.kind()) {
      case Type::Kind::Var: {
        if (auto it = fixed.find(p.name()); it != fixed.end())
          return it->second == r ? std::vector<Assign>{Assign{}} : std::vector<Assign>{};
        return std::vector<Assign>{Assign{{p.name(), r}}};
      }
      case Type::Kind::Bool:
      case Type::Kind::Unit:
        return r == eq_rel(p, env) ? std::vector<Assign>{Assign{}} : std::vector<Assign>{};
      case Type::Kind::Prod: {
        const Type &a = r.src(), &b = r.tgt();
        if (!a.is(Type::Kind::Prod) || !b.is(Type::Kind::Prod)) return std::nullopt;
        if (r.empty()) {
          auto l = decompose(p.left(), Rel(a.left(), b.left(), {}), fixed);
          auto rr = decompose(p.right(), Rel(a.right(), b.right(), {}), fixed);
          if (!l || !rr) return std::nullopt;
          l->insert(l->end(), rr->begin(), rr->end());
          return l;
        }
        std::vector<Rel::Pair> ps1, ps2;
        for (const auto &[u, v] : r.pairs()) {
          ps1.emplace_back(u.first(), v.first());
          ps2.emplace_back(u.second(), v.second());
        }
        Rel r1(a.left(), b.left(), ps1), r2(a.right(), b.right(), ps2);
        if (!(product_rel(r1, r2) == r)) return std::vector<Assign>{};
        auto l = decompose(p.left(), r1, fixed);
        auto rr = decompose(p.right(), r2, fixed);
        if (!l || !rr) return std::nullopt;
        return merge_all(*l, *rr);
      }
      default:
        return std::nullopt;
    }
  }

  // Pattern matching by splitting the target relations, for tables too large
  // to enumerate. Unconstrained variables are enumerated once the premises
  // that do not read them hold.
  Verdict decomposed(const CtorInfo &ci, const Term &x, const Term &y, const TypeSubst &sx,
                     const TypeSubst &sy, const std::vector<Rel> &rels,
                     const std::map<std::string, Rel> &rho,
                     std::vector<std::vector<Rel>> &combos) {
    const auto &c = *ci.c;
    std::vector<Assign> acc{Assign{}};
    for (std::size_t k = 0; k < ci.forced.size(); ++k) {
      if (!ci.forced[k].empty()) continue;
      auto d = decompose(c.sig.ret_instance[k], rels[k], rho);
      if (!d) return Verdict::Inconclusive;
      acc = merge_all(acc, *d);
    }
    bool unknown = false;
    for (const auto &a : acc) {
      auto r = rho;
      for (const auto &[v, rel] : a) r[v] = rel;
      std::vector<std::size_t> open;
      for (std::size_t i = 0; i < ci.pattern_vars.size(); ++i)
        if (!a.count(ci.pattern_vars[i])) open.push_back(i);
      std::vector<Rel> combo;
      for (const auto &v : ci.pattern_vars) combo.push_back(a.count(v) ? a.at(v) : Rel());
      if (open.empty()) {
        combos.push_back(std::move(combo));
        continue;
      }
      std::vector<int> settled;
      for (std::size_t j = 0; j < c.sig.args.size(); ++j) {
        std::set<std::string> fv;
        c.sig.args[j].free_vars(fv);
        if (std::all_of(fv.begin(), fv.end(), [&](const std::string &v) { return r.count(v); }))
          settled.push_back(static_cast<int>(j));
      }
      auto v = premises(ci, settled, x, y, sx, sy, r);
      if (v == Verdict::NotRelated) continue;
      if (v == Verdict::Inconclusive) unknown = true;
      std::vector<const RelSpace *> sp;
      std::uint64_t total = 1;
      try {
        for (auto i : open) {
          const auto &var = ci.pattern_vars[i];
          sp.push_back(&space(*lookup(sx, var), *lookup(sy, var)));
          total *= sp.back()->count();
          if (total > static_cast<std::uint64_t>(env.caps().max_rel_enum))
            throw CapError(fmt::format("{} choices for unconstrained relations of {} exceed "
                                       "max_rel_enum {}",
                                       total, c.sig.name, env.caps().max_rel_enum));
        }
      } catch (const CapError &e) {
        note = e.what();
        unknown = true;
        continue;
      }
      std::vector<std::uint64_t> idx(open.size(), 0);
      while (true) {
        for (std::size_t i = 0; i < open.size(); ++i) combo[open[i]] = sp[i]->rel(idx[i]);
        combos.push_back(combo);
        std::size_t p = open.size();
        while (p > 0 && ++idx[p - 1] == sp[p - 1]->count()) idx[--p] = 0;
        if (p == 0) break;
      }
    }
    return unknown ? Verdict::Inconclusive : Verdict::Related;
  }

  std::shared_ptr<const PatternTable> pattern_table(const CtorInfo &ci, const TypeSubst &sx,
                                                    const TypeSubst &sy,
                                                    const std::map<std::string, Rel> &forced) {
    std::vector<Type> key_types;
    for (const auto &v : ci.pattern_vars) {
      key_types.push_back(*lookup(sx, v));
      key_types.push_back(*lookup(sy, v));
    }
    std::vector<Rel> key_rels;
    for (const auto &[_, r] : forced) key_rels.push_back(r);
    PatternKey key(ci.c->sig.name, std::move(key_types), std::move(key_rels));
    if (auto it = patterns.find(key); it != patterns.end()) return it->second;

    auto table = std::make_shared<PatternTable>();
    std::vector<const RelSpace *> sp;
    std::uint64_t total = 1;
    try {
      for (const auto &v : ci.pattern_vars) {
        sp.push_back(&space(*lookup(sx, v), *lookup(sy, v)));
        total *= sp.back()->count();
        if (total > static_cast<std::uint64_t>(env.caps().max_rel_enum))
          throw CapError(fmt::format("{} relation decompositions for {} exceed max_rel_enum {}",
                                     total, ci.c->sig.name, env.caps().max_rel_enum));
      }
    } catch (const CapError &e) {
      note = e.what();
      table->inconclusive = true;
      patterns.emplace(key, table);
      return table;
    }
    std::vector<std::uint64_t> idx(sp.size(), 0);
    while (true) {
      std::map<std::string, Rel> rho = forced;
      std::vector<Rel> combo;
      for (std::size_t i = 0; i < sp.size(); ++i) {
        combo.push_back(sp[i]->rel(idx[i]));
        rho[ci.pattern_vars[i]] = combo.back();
      }
      std::vector<Rel> image;
      for (std::size_t k = 0; k < ci.forced.size(); ++k)
        if (ci.forced[k].empty())
          image.push_back(materialize(ci.c->sig.ret_instance[k], rho, sx, sy, env));
      table->by_image[image].push_back(std::move(combo));
      std::size_t p = sp.size();
      bool done = true;
      while (p > 0) {
        --p;
        if (++idx[p] < sp[p]->count()) {
          done = false;
          break;
        }
        idx[p] = 0;
      }
      if (done) break;
    }
    patterns.emplace(key, table);
    return table;
  }

  std::shared_ptr<const Candidates> prefilter(const CtorInfo &ci, std::size_t e, const Term &x,
                                              const Term &y, const TypeSubst &sx,
                                              const TypeSubst &sy,
                                              const std::map<std::string, Rel> &rho) {
    const auto &var = ci.evars[e];
    std::vector<Rel> fixed;
    for (const auto &v : ci.solo_fixed[e]) fixed.push_back(rho.at(v));
    PreKey key(x, y, var, fixed);
    if (auto it = pre.find(key); it != pre.end()) return it->second;

    auto out = std::make_shared<Candidates>();
    const RelSpace *sp = nullptr;
    try {
      sp = &space(*lookup(sx, var), *lookup(sy, var));
    } catch (const CapError &err) {
      note = err.what();
      out->incomplete = true;
      pre.emplace(key, out);
      return out;
    }
    auto pol = ci.polarity[e];
    std::vector<std::uint64_t> accepted;
    std::map<std::string, Rel> r2 = rho;
    for (auto m : sp->by_size()) {
      if (pol == Polarity::Neg &&
          std::any_of(accepted.begin(), accepted.end(),
                      [&](std::uint64_t a) { return (m & a) == a; }))
        continue;
      r2[var] = sp->rel(m);
      auto v = premises(ci, ci.solo_args[e], x, y, sx, sy, r2);
      if (v == Verdict::Inconclusive) out->incomplete = true;
      if (v != Verdict::Related) continue;
      accepted.push_back(m);
      if (pol == Polarity::None) break;
    }
    if (pol == Polarity::Pos) {
      std::vector<std::uint64_t> maximal;
      for (auto m : accepted)
        if (std::none_of(accepted.begin(), accepted.end(),
                         [&](std::uint64_t a) { return a != m && (m & a) == m; }))
          maximal.push_back(m);
      accepted = std::move(maximal);
    }
    for (auto m : accepted) out->rels.push_back(sp->rel(m));
    pre.emplace(key, out);
    return out;
  }

  Verdict existentials(const CtorInfo &ci, const Term &x, const Term &y, const TypeSubst &sx,
                       const TypeSubst &sy, std::map<std::string, Rel> &rho) {
    auto v = premises(ci, ci.fixed_args, x, y, sx, sy, rho);
    if (v != Verdict::Related || ci.evars.empty()) return v;
    bool unknown = false;
    std::vector<std::shared_ptr<const Candidates>> cands;
    std::uint64_t total = 1;
    for (std::size_t e = 0; e < ci.evars.size(); ++e) {
      cands.push_back(prefilter(ci, e, x, y, sx, sy, rho));
      unknown = unknown || cands.back()->incomplete;
      total *= cands.back()->rels.size();
      if (total == 0) return unknown ? Verdict::Inconclusive : Verdict::NotRelated;
      if (total > static_cast<std::uint64_t>(env.caps().max_rel_enum)) {
        note = fmt::format("{} relation choices for {} exceed max_rel_enum {}", total,
                           ci.c->sig.name, env.caps().max_rel_enum);
        return Verdict::Inconclusive;
      }
    }
    // Choices in ascending total size.
    std::vector<std::vector<std::uint32_t>> tuples;
    std::vector<std::uint32_t> idx(cands.size(), 0);
    while (true) {
      tuples.push_back(idx);
      std::size_t p = idx.size();
      bool done = true;
      while (p > 0) {
        --p;
        if (++idx[p] < cands[p]->rels.size()) {
          done = false;
          break;
        }
        idx[p] = 0;
      }
      if (done) break;
    }
    auto size_of = [&](const std::vector<std::uint32_t> &t) {
      std::size_t s = 0;
      for (std::size_t e = 0; e < t.size(); ++e) s += cands[e]->rels[t[e]].size();
      return s;
    };
    std::stable_sort(tuples.begin(), tuples.end(),
                     [&](const auto &a, const auto &b) { return size_of(a) < size_of(b); });
    for (const auto &t : tuples) {
      for (std::size_t e = 0; e < t.size(); ++e) rho[ci.evars[e]] = cands[e]->rels[t[e]];
      auto w = premises(ci, ci.joint_args, x, y, sx, sy, rho);
      if (w == Verdict::Related) return w;
      if (w == Verdict::Inconclusive) unknown = true;
    }
    return unknown ? Verdict::Inconclusive : Verdict::NotRelated;
  }

  Verdict solve(const Term &x, const Term &y, const std::vector<Rel> &rels, Derivation *out) {
    if (!out) {
      // leaves are cheaper to decide than to look up
      if (x.is(Term::Kind::Con) && y.is(Term::Kind::Con) && x.ctor() == y.ctor()) {
        const auto &rec = info(x.ctor()).c->recursive;
        if (std::none_of(rec.begin(), rec.end(), [](bool b) { return b; }))
          return search(x, y, rels, nullptr);
      }
      MemoKey key(x, y, rels);
      if (auto it = memo.find(key); it != memo.end()) return it->second;
      auto v = search(x, y, rels, nullptr);
      if (memo.size() > kMemoLimit) memo.clear();
      memo.emplace(std::move(key), v);
      return v;
    }
    return search(x, y, rels, out);
  }

  Verdict search(const Term &x, const Term &y, const std::vector<Rel> &rels, Derivation *out) {
    if (!x.is(Term::Kind::Con) || !y.is(Term::Kind::Con))
      throw CheckError("lifting relates constructor terms only");
    if (x.ctor() != y.ctor()) return Verdict::NotRelated;
    const CtorInfo &ci = info(x.ctor());
    const auto &c = *ci.c;
    auto sx = ctor_subst(c, x);
    auto sy = ctor_subst(c, y);
    std::map<std::string, Rel> rho;
    for (std::size_t k = 0; k < ci.forced.size(); ++k) {
      if (ci.forced[k].empty()) continue;
      rho[ci.forced[k]] = rels[k];
    }

    std::vector<std::vector<Rel>> combos;
    bool unknown = false;
    if (!ci.pattern_vars.empty()) {
      auto note_before = note;
      auto table = pattern_table(ci, sx, sy, rho);
      if (table->inconclusive) {
        unknown = decomposed(ci, x, y, sx, sy, rels, rho, combos) == Verdict::Inconclusive;
        if (!unknown) note = note_before;
      } else {
        std::vector<Rel> image;
        for (std::size_t k = 0; k < ci.forced.size(); ++k)
          if (ci.forced[k].empty()) image.push_back(rels[k]);
        auto it = table->by_image.find(image);
        if (it == table->by_image.end()) return Verdict::NotRelated;
        combos = it->second;
      }
    } else {
      for (std::size_t k = 0; k < ci.forced.size(); ++k)
        if (ci.forced[k].empty() &&
            !(materialize(c.sig.ret_instance[k], rho, sx, sy, env) == rels[k]))
          return Verdict::NotRelated;
      combos.emplace_back();
    }

    for (const auto &combo : combos) {
      auto r = rho;
      for (std::size_t i = 0; i < combo.size(); ++i) r[ci.pattern_vars[i]] = combo[i];
      auto v = existentials(ci, x, y, sx, sy, r);
      if (v == Verdict::Related) {
        if (out) build(ci, x, y, sx, sy, rels, r, *out);
        return v;
      }
      if (v == Verdict::Inconclusive) unknown = true;
    }
    return unknown ? Verdict::Inconclusive : Verdict::NotRelated;
  }

  static bool has_choices(const Derivation &d) {
    if (!d.existential.empty()) return true;
    return std::any_of(d.children.begin(), d.children.end(), has_choices);
  }

  std::vector<Derivation> children(const CtorInfo &ci, const Term &x, const Term &y,
                                   const TypeSubst &sx, const TypeSubst &sy,
                                   const std::map<std::string, Rel> &rho) {
    std::vector<Derivation> kids;
    const auto &c = *ci.c;
    for (std::size_t j = 0; j < c.sig.args.size(); ++j) {
      if (!c.recursive[j]) continue;
      std::vector<Rel> sub;
      for (const auto &t : c.sig.args[j].args()) sub.push_back(materialize(t, rho, sx, sy, env));
      Derivation d;
      if (solve(x.args()[j], y.args()[j], sub, &d) != Verdict::Related)
        throw Error("derivation search lost a premise");
      kids.push_back(std::move(d));
    }
    return kids;
  }

  // Widens existential choices whose sub-derivations are plain data to the
  // largest relation the premises allow.
  void saturate(const CtorInfo &ci, const Term &x, const Term &y, const TypeSubst &sx,
                const TypeSubst &sy, std::map<std::string, Rel> &rho) {
    const auto &c = *ci.c;
    auto base = rho;
    auto widened = rho;
    bool changed = false;
    for (std::size_t e = 0; e < ci.evars.size(); ++e) {
      const auto &var = ci.evars[e];
      bool leaves = true;
      std::vector<int> touching;
      for (std::size_t j = 0; j < c.sig.args.size(); ++j) {
        if (!c.sig.args[j].mentions_var(var)) continue;
        touching.push_back(static_cast<int>(j));
        if (!c.recursive[j]) continue;
        std::vector<Rel> sub;
        for (const auto &t : c.sig.args[j].args())
          sub.push_back(materialize(t, base, sx, sy, env));
        Derivation d;
        solve(x.args()[j], y.args()[j], sub, &d);
        if (has_choices(d)) leaves = false;
      }
      if (!leaves) continue;
      const RelSpace *sp;
      try {
        sp = &space(*lookup(sx, var), *lookup(sy, var));
      } catch (const CapError &) {
        continue;
      }
      auto cur = sp->mask_of(base.at(var));
      if (!cur) continue;
      std::uint64_t grown = *cur;
      for (int bit = 0; bit < sp->bits(); ++bit) {
        std::uint64_t m = *cur | (std::uint64_t{1} << bit);
        if (m == *cur) continue;
        auto r2 = base;
        r2[var] = sp->rel(m);
        if (premises(ci, touching, x, y, sx, sy, r2) == Verdict::Related) grown |= m;
      }
      if (grown != *cur) {
        widened[var] = sp->rel(grown);
        changed = true;
      }
    }
    if (!changed) return;
    std::vector<int> all(c.sig.args.size());
    std::iota(all.begin(), all.end(), 0);
    if (premises(ci, all, x, y, sx, sy, widened) == Verdict::Related) rho = std::move(widened);
  }

  void build(const CtorInfo &ci, const Term &x, const Term &y, const TypeSubst &sx,
             const TypeSubst &sy, const std::vector<Rel> &rels, std::map<std::string, Rel> rho,
             Derivation &out) {
    if (!ci.evars.empty()) saturate(ci, x, y, sx, sy, rho);
    out.decl = rules->name();
    out.ctor = ci.c->sig.name;
    out.rule = rule_name(out.ctor);
    out.lhs = x;
    out.rhs = y;
    out.target = rels;
    out.chosen.clear();
    for (const auto &q : ci.c->sig.quantified) out.chosen.emplace_back(q, rho.at(q));
    out.existential = ci.evars;
    out.args = ci.c->sig.args;
    out.recursive = ci.c->recursive;
    out.children = children(ci, x, y, sx, sy, rho);
  }
};

Lifter::Lifter(const CheckedDecl &decl, LiftMode mode, const Env &env)
    : impl_(std::make_unique<Impl>(decl, mode, env)) {}
Lifter::~Lifter() = default;

LiftMode Lifter::mode() const { return impl_->mode; }
const CheckedDecl &Lifter::rule_decl() const { return *impl_->rules; }
const CompletedDecl *Lifter::completion() const { return impl_->cd ? &*impl_->cd : nullptr; }
const std::string &Lifter::last_note() const { return impl_->note; }
void Lifter::clear_memo() {
  impl_->memo.clear();
  impl_->pre.clear();
}

Term Lifter::prepare(const Term &x) const {
  if (impl_->mode == LiftMode::Naive) return x;
  return embed(*impl_->cd, x, impl_->env);
}

namespace {
void validate(const CheckedDecl &decl, const Term &x, const Term &y, const std::vector<Rel> &rels,
              const Env &env) {
  auto tx = type_of(x, env);
  auto ty = type_of(y, env);
  if (!tx.is(Type::Kind::App) || tx.name() != decl.name())
    throw CheckError(fmt::format("{} is not a value of {}", to_string(x), decl.name()));
  if (!ty.is(Type::Kind::App) || ty.name() != decl.name())
    throw CheckError(fmt::format("{} is not a value of {}", to_string(y), decl.name()));
  if (static_cast<int>(rels.size()) != decl.arity())
    throw CheckError(fmt::format("{} needs {} relation(s), got {}", decl.name(), decl.arity(),
                                 rels.size()));
  for (std::size_t k = 0; k < rels.size(); ++k)
    if (!(rels[k].src() == tx.args()[k]) || !(rels[k].tgt() == ty.args()[k]))
      throw CheckError(fmt::format("relation over {} × {} does not fit {} and {}",
                                   to_string(rels[k].src()), to_string(rels[k].tgt()),
                                   to_string(tx), to_string(ty)));
}
}  // namespace

Verdict Lifter::check(const Term &x, const Term &y, const std::vector<Rel> &rels) {
  validate(impl_->original, x, y, rels, impl_->env);
  return check_prepared(prepare(x), prepare(y), rels);
}

LiftResult Lifter::check_with_witness(const Term &x, const Term &y, const std::vector<Rel> &rels) {
  validate(impl_->original, x, y, rels, impl_->env);
  return witness_prepared(prepare(x), prepare(y), rels);
}

Verdict Lifter::check_prepared(const Term &x, const Term &y, const std::vector<Rel> &rels,
                               bool memoize) {
  return memoize ? impl_->solve(x, y, rels, nullptr) : impl_->search(x, y, rels, nullptr);
}

LiftResult Lifter::witness_prepared(const Term &x, const Term &y, const std::vector<Rel> &rels) {
  LiftResult r;
  r.verdict = impl_->solve(x, y, rels, nullptr);
  if (r.verdict == Verdict::Related) {
    Derivation d;
    impl_->solve(x, y, rels, &d);
    r.witness = std::move(d);
  } else if (r.verdict == Verdict::Inconclusive) {
    r.note = impl_->note;
  }
  return r;
}

LiftResult lift_check(const CheckedDecl &decl, LiftMode mode, const Rel &r, const Term &x,
                      const Term &y, const Env &env, bool witness) {
  Lifter l(decl, mode, env);
  if (witness) return l.check_with_witness(x, y, {r});
  LiftResult out;
  out.verdict = l.check(x, y, {r});
  if (out.verdict == Verdict::Inconclusive) out.note = l.last_note();
  return out;
}

Rel lift_relation(const CheckedDecl &decl, LiftMode mode, const Rel &r, int depth,
                  const Env &env) {
  if (decl.arity() != 1)
    throw CheckError(fmt::format("lift_relation supports unary declarations; {} has arity {}",
                                 decl.name(), decl.arity()));
  auto xs = enumerate_values(decl, {r.src()}, depth, env);
  auto ys = enumerate_values(decl, {r.tgt()}, depth, env);
  Lifter l(decl, mode, env);
  std::vector<Term> px, py;
  for (const auto &x : xs) px.push_back(l.prepare(x));
  for (const auto &y : ys) py.push_back(l.prepare(y));
  std::vector<Rel::Pair> pairs;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < ys.size(); ++j) {
      auto v = l.check_prepared(px[i], py[j], {r});
      if (v == Verdict::Inconclusive)
        throw CapError(fmt::format("lifting inconclusive at ({}, {}): {}", to_string(xs[i]),
                                   to_string(ys[j]), l.last_note()));
      if (v == Verdict::Related) pairs.emplace_back(xs[i], ys[j]);
    }
  return Rel(Type::app(decl.name(), {r.src()}), Type::app(decl.name(), {r.tgt()}),
             std::move(pairs));
}

// ---------------------------------------------------------------- replay

ReplayResult replay(const Derivation &d, const Env &env, const CheckedDecl &rule_decl) {
  auto fail = [&](std::string msg) {
    return ReplayResult{false, fmt::format("{} at {}: {}", d.rule, to_string(d.lhs), msg)};
  };
  const CheckedCtor *c = rule_decl.find(d.ctor);
  if (!c) return fail("constructor not in " + rule_decl.name());
  if (d.rule != rule_name(d.ctor)) return fail("rule name does not match constructor");
  if (!d.lhs.is(Term::Kind::Con) || !d.rhs.is(Term::Kind::Con) || d.lhs.ctor() != d.ctor ||
      d.rhs.ctor() != d.ctor)
    return fail("conclusion heads differ from the rule");
  if (d.lhs.args().size() != c->sig.args.size() || d.rhs.args().size() != c->sig.args.size())
    return fail("argument count");
  auto sx = ctor_subst(*c, d.lhs);
  auto sy = ctor_subst(*c, d.rhs);
  if (d.chosen.size() != c->sig.quantified.size()) return fail("missing relation choices");
  std::map<std::string, Rel> rho;
  for (std::size_t i = 0; i < d.chosen.size(); ++i) {
    const auto &[v, r] = d.chosen[i];
    if (v != c->sig.quantified[i]) return fail("relation choices out of order");
    if (!(r.src() == *lookup(sx, v)) || !(r.tgt() == *lookup(sy, v)))
      return fail("relation for " + v + " has the wrong type");
    rho.emplace(v, r);
  }
  try {
    if (d.target.size() != c->sig.ret_instance.size()) return fail("conclusion arity");
    for (std::size_t k = 0; k < d.target.size(); ++k)
      if (!(materialize(c->sig.ret_instance[k], rho, sx, sy, env) == d.target[k]))
        return fail("conclusion relation does not match");
    std::size_t kid = 0;
    for (std::size_t j = 0; j < c->sig.args.size(); ++j) {
      const Type &phi = c->sig.args[j];
      if (c->recursive[j]) {
        if (kid >= d.children.size()) return fail("missing sub-derivation");
        const Derivation &ch = d.children[kid++];
        if (!(ch.lhs == d.lhs.args()[j]) || !(ch.rhs == d.rhs.args()[j]))
          return fail("sub-derivation about the wrong terms");
        std::vector<Rel> sub;
        for (const auto &t : phi.args()) sub.push_back(materialize(t, rho, sx, sy, env));
        if (ch.target != sub) return fail("sub-derivation at the wrong relation");
        auto r = replay(ch, env, rule_decl);
        if (!r.ok) return r;
      } else if (!relate_type(phi, rho, d.lhs.args()[j], d.rhs.args()[j], env)) {
        return fail(fmt::format("premise {} does not hold", j + 1));
      }
    }
    if (kid != d.children.size()) return fail("extra sub-derivations");
  } catch (const Error &e) {
    return fail(e.what());
  }
  return {};
}

// ---------------------------------------------------------------- witness printing

namespace {

struct WitnessPrinter {
  PrintOptions opts;
  std::vector<Rel> rels;
  std::vector<std::string> facts;

  std::string rel_name(const Rel &r) {
    for (std::size_t i = 0; i < rels.size(); ++i)
      if (rels[i] == r) return sub("R", i + 1, opts);
    rels.push_back(r);
    return sub("R", rels.size(), opts);
  }

  std::string term(const Term &t, bool atom) {
    switch (t.kind()) {
      case Term::Kind::Fun:
        return is_identity(t) ? "id" : (atom ? "(" + to_string(t, opts) + ")" : to_string(t, opts));
      case Term::Kind::Pair:
        return "(" + term(t.first(), false) + ", " + term(t.second(), false) + ")";
      case Term::Kind::Con: {
        std::string s = t.ctor();
        for (const auto &a : t.args()) s += " " + term(a, true);
        return atom && !t.args().empty() ? "(" + s + ")" : s;
      }
      default:
        return to_string(t, opts);
    }
  }

  std::string node(const Derivation &d) {
    std::string s = d.rule;
    for (const auto &[v, r] : d.chosen) s += " " + rel_name(r);
    for (const auto &a : d.lhs.args()) s += " " + term(a, true);
    for (const auto &a : d.rhs.args()) s += " " + term(a, true);
    LiftRule names;
    for (const auto &[v, r] : d.chosen) {
      names.vars.push_back(v);
      names.rel_names.push_back(rel_name(r));
    }
    std::size_t kid = 0;
    for (std::size_t j = 0; j < d.lhs.args().size(); ++j) {
      if (j < d.recursive.size() && d.recursive[j] && kid < d.children.size()) {
        s += " (" + node(d.children[kid++]) + ")";
        continue;
      }
      std::string p;
      if (j < d.args.size()) lift_str(p, d.args[j], names, 2, opts);
      facts.push_back(fmt::format("{} : {} {} {}", sub("w", facts.size() + 1, opts), p,
                                  term(d.lhs.args()[j], true), term(d.rhs.args()[j], true)));
      s += " " + sub("w", facts.size(), opts);
    }
    return s;
  }
};

}  // namespace

std::string print_witness(const Derivation &d, PrintOptions opts) {
  WitnessPrinter wp{opts, {}, {}};
  std::string out = wp.node(d) + "\n";
  out += "where\n";
  for (std::size_t i = 0; i < wp.rels.size(); ++i)
    out += fmt::format("  {} = {}\n", sub("R", i + 1, opts), to_string(wp.rels[i], opts));
  for (const auto &f : wp.facts) out += "  " + f + "\n";
  return out;
}

}  // namespace gadtparam
