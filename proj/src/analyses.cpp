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

#include "gadtparam/analyses.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>

#include "gadtparam/completion.hpp"
#include "gadtparam/error.hpp"
#include "gadtparam/printer.hpp"

namespace gadtparam {

// ---------------------------------------------------------------- preservation

std::string PreservationReport::verdict() const {
  if (violations > 0) return "FAIL";
  if (inconclusive > 0) return "INCONCLUSIVE";
  return "PASS";
}

namespace {

using Bits = std::vector<std::uint64_t>;

struct Grid {
  std::vector<Term> xs, ys, px, py;
  std::size_t words = 0;
};

Grid make_grid(const CheckedDecl &decl, const Lifter &l, const Type &a, const Type &b, int depth,
               const Env &env) {
  Grid g;
  g.xs = enumerate_values(decl, {a}, depth, env);
  g.ys = enumerate_values(decl, {b}, depth, env);
  for (const auto &x : g.xs) g.px.push_back(l.prepare(x));
  for (const auto &y : g.ys) g.py.push_back(l.prepare(y));
  g.words = (g.xs.size() * g.ys.size() + 63) / 64;
  return g;
}

void set_bit(Bits &b, std::size_t i) { b[i / 64] |= std::uint64_t{1} << (i % 64); }

}  // namespace

InclusionReport check_inclusion(const CheckedDecl &decl, LiftMode mode, const Rel &r,
                                const Rel &s, int depth, const Env &env) {
  if (!(r.src() == s.src()) || !(r.tgt() == s.tgt()))
    throw CheckError("inclusion check needs relations over the same types");
  InclusionReport out;
  out.r = r;
  out.s = s;
  out.r_included = includes(r, s);
  Lifter l(decl, mode, env);
  Grid g = make_grid(decl, l, r.src(), r.tgt(), depth, env);
  for (std::size_t i = 0; i < g.xs.size(); ++i)
    for (std::size_t j = 0; j < g.ys.size(); ++j) {
      auto vr = l.check_prepared(g.px[i], g.py[j], {r});
      if (vr == Verdict::Inconclusive) {
        ++out.inconclusive;
        continue;
      }
      if (vr != Verdict::Related) continue;
      auto vs = l.check_prepared(g.px[i], g.py[j], {s});
      if (vs == Verdict::Inconclusive) {
        ++out.inconclusive;
      } else if (vs == Verdict::NotRelated) {
        out.violations.emplace_back(g.xs[i], g.ys[j]);
        if (!out.first) {
          auto w = l.witness_prepared(g.px[i], g.py[j], {r});
          out.first = PreservationWitness{r, s, g.xs[i], g.ys[j], w.witness};
        }
      }
    }
  return out;
}

PreservationReport check_preservation(const CheckedDecl &decl, LiftMode mode,
                                      const std::vector<Type> &universe, int depth,
                                      const Env &env, const PreservationOptions &opts) {
  PreservationReport rep;
  rep.decl = decl.name();
  rep.mode = mode;
  rep.depth = depth;
  rep.universe = universe;
  if (decl.arity() != 1)
    throw CheckError(fmt::format("preservation audit supports unary declarations; {} has arity {}",
                                 decl.name(), decl.arity()));
  Lifter l(decl, mode, env);
  for (const auto &a : universe)
    for (const auto &b : universe) {
      try {
        Grid g = make_grid(decl, l, a, b, depth, env);
        RelSpace sp(a, b, env);
        const std::uint64_t n = sp.count();
        const std::size_t cells = g.xs.size() * g.ys.size();
        std::vector<Bits> lifted(n, Bits(g.words, 0)), unknown(n, Bits(g.words, 0));
        for (std::uint64_t m = 0; m < n; ++m) {
          const Rel &r = sp.rel(m);
          for (std::size_t i = 0; i < g.xs.size(); ++i)
            for (std::size_t j = 0; j < g.ys.size(); ++j) {
              auto v = l.check_prepared(g.px[i], g.py[j], {r}, false);
              if (v == Verdict::Related) set_bit(lifted[m], i * g.ys.size() + j);
              if (v == Verdict::Inconclusive) {
                set_bit(unknown[m], i * g.ys.size() + j);
                ++rep.inconclusive;
              }
            }
          ++rep.relations;
        }
        if (rep.inconclusive && !l.last_note().empty()) rep.notes.push_back(l.last_note());
        const std::uint64_t full = n - 1;
        for (std::uint64_t m = 0; m < n; ++m) {
          for (std::uint64_t s = m;; s = (s + 1) | m) {
            ++rep.pairs;
            bool bad = false;
            std::size_t cell = 0;
            for (std::size_t w = 0; w < g.words && !bad; ++w) {
              auto diff = lifted[m][w] & ~lifted[s][w] & ~unknown[s][w];
              if (diff) {
                bad = true;
                cell = w * 64 + static_cast<std::size_t>(__builtin_ctzll(diff));
              }
            }
            if (bad) {
              ++rep.violations;
              if (rep.witnesses.size() < opts.max_witnesses && cell < cells) {
                std::size_t i = cell / g.ys.size(), j = cell % g.ys.size();
                auto w = l.witness_prepared(g.px[i], g.py[j], {sp.rel(m)});
                rep.witnesses.push_back({sp.rel(m), sp.rel(s), g.xs[i], g.ys[j], w.witness});
              }
            }
            if (s == full) break;
          }
        }
      } catch (const CapError &e) {
        ++rep.inconclusive;
        rep.notes.push_back(fmt::format("{} × {}: {}", to_string(a), to_string(b), e.what()));
      }
    }
  if (opts.focus) {
    const auto &[r, s] = *opts.focus;
    bool in_universe = std::find(universe.begin(), universe.end(), r.src()) != universe.end() &&
                       std::find(universe.begin(), universe.end(), r.tgt()) != universe.end();
    if (in_universe) rep.focus = check_inclusion(decl, mode, r, s, depth, env);
  }
  return rep;
}

// ---------------------------------------------------------------- gmap

const char *to_string(GmapStatus s) {
  switch (s) {
    case GmapStatus::Defined: return "Defined";
    case GmapStatus::Undefined: return "Undefined";
    case GmapStatus::NonUnique: return "NonUnique";
    case GmapStatus::Inconclusive: return "Inconclusive";
  }
  return "?";
}

namespace {

struct Shaper {
  const CheckedDecl &decl;
  const Env &env;
  std::size_t produced = 0;

  void count(std::size_t n) {
    produced += n;
    if (static_cast<std::int64_t>(produced) > env.caps().max_rel_enum)
      throw CapError(fmt::format("more than {} gmap candidates (max_rel_enum)",
                                 env.caps().max_rel_enum));
  }

  std::vector<Term> run(const Term &x, const std::vector<Type> &inst) {
    if (!x.is(Term::Kind::Con)) throw CheckError("gmap expects a constructor term");
    const CheckedCtor *c = decl.find(x.ctor());
    if (!c) throw CheckError(fmt::format("{} is not a constructor of {}", x.ctor(), decl.name()));
    TypeSubst s;
    for (std::size_t k = 0; k < inst.size(); ++k)
      if (!match_type(c->sig.ret_instance[k], inst[k], s)) return {};
    std::vector<std::string> open;
    std::vector<std::vector<Type>> options;
    for (std::size_t q = 0; q < c->sig.quantified.size(); ++q) {
      if (lookup(s, c->sig.quantified[q])) continue;
      open.push_back(c->sig.quantified[q]);
      std::vector<Type> opt{x.type_args()[q]};
      for (const auto &t : env.existential_types())
        if (std::find(opt.begin(), opt.end(), t) == opt.end()) opt.push_back(t);
      options.push_back(std::move(opt));
    }
    std::vector<Term> out;
    std::vector<std::size_t> pick(open.size(), 0);
    while (true) {
      TypeSubst full = s;
      for (std::size_t i = 0; i < open.size(); ++i) full.emplace_back(open[i], options[i][pick[i]]);
      emit(*c, x, full, out);
      std::size_t p = open.size();
      bool done = true;
      while (p > 0) {
        --p;
        if (++pick[p] < options[p].size()) {
          done = false;
          break;
        }
        pick[p] = 0;
      }
      if (done) break;
    }
    return out;
  }

  void emit(const CheckedCtor &c, const Term &x, const TypeSubst &s, std::vector<Term> &out) {
    std::vector<Type> targs;
    for (const auto &q : c.sig.quantified) targs.push_back(*lookup(s, q));
    std::vector<std::vector<Term>> choices;
    for (std::size_t j = 0; j < c.sig.args.size(); ++j) {
      auto t = substitute(c.sig.args[j], s);
      choices.push_back(c.recursive[j] ? run(x.args()[j], t.args()) : carrier(t, env));
      if (choices.back().empty()) return;
    }
    std::vector<std::size_t> idx(choices.size(), 0);
    while (true) {
      std::vector<Term> args;
      for (std::size_t j = 0; j < choices.size(); ++j) args.push_back(choices[j][idx[j]]);
      out.push_back(Term::con(c.sig.name, targs, std::move(args)));
      count(1);
      std::size_t p = choices.size();
      bool done = true;
      while (p > 0) {
        --p;
        if (++idx[p] < choices[p].size()) {
          done = false;
          break;
        }
        idx[p] = 0;
      }
      if (done) return;
    }
  }
};

GmapResult gmap_with(Lifter &l, const CheckedDecl &decl, const Rel &graph_f, const Term &f,
                     const Term &x, const Env &env) {
  GmapResult out;
  std::vector<Term> cands;
  try {
    cands = shape_candidates(decl, x, f.cod(), env);
  } catch (const CapError &e) {
    out.status = GmapStatus::Inconclusive;
    out.note = e.what();
    return out;
  }
  out.candidates = cands.size();
  Term px = l.prepare(x);
  bool unknown = false;
  std::vector<Term> partners;
  for (const auto &y : cands) {
    auto v = l.check_prepared(px, l.prepare(y), {graph_f});
    if (v == Verdict::Related) partners.push_back(y);
    if (v == Verdict::Inconclusive) unknown = true;
  }
  if (unknown) {
    out.status = GmapStatus::Inconclusive;
    out.note = l.last_note();
  }
  if (partners.empty()) {
    if (!unknown) out.status = GmapStatus::Undefined;
    return out;
  }
  out.value = partners[0];
  out.witness = l.witness_prepared(px, l.prepare(partners[0]), {graph_f}).witness;
  if (partners.size() > 1) {
    out.status = GmapStatus::NonUnique;
    out.other = partners[1];
    out.other_witness = l.witness_prepared(px, l.prepare(partners[1]), {graph_f}).witness;
  } else if (!unknown) {
    out.status = GmapStatus::Defined;
  }
  return out;
}

Type function_domain_check(const CheckedDecl &decl, const Term &f, const Term &x,
                           const Env &env) {
  if (!f.is(Term::Kind::Fun)) throw CheckError("expected a function table");
  type_of(f, env);
  auto tx = type_of(x, env);
  if (!tx.is(Type::Kind::App) || tx.name() != decl.name() || tx.args().size() != 1)
    throw CheckError(fmt::format("{} is not a value of {}", to_string(x), decl.name()));
  if (!(tx.args()[0] == f.dom()))
    throw CheckError(fmt::format("function domain {} does not match {}", to_string(f.dom()),
                                 to_string(tx)));
  return tx.args()[0];
}

}  // namespace

std::vector<Term> shape_candidates(const CheckedDecl &decl, const Term &x, const Type &cod,
                                   const Env &env) {
  Shaper sh{decl, env};
  return sh.run(x, {cod});
}

GmapResult gmap(const CheckedDecl &decl, const Term &f, const Term &x, const Env &env,
                LiftMode mode) {
  function_domain_check(decl, f, x, env);
  Lifter l(decl, mode, env);
  return gmap_with(l, decl, graph(f, env), f, x, env);
}

Term adt_map(const CheckedDecl &decl, const Term &f, const Term &x, const Env &env) {
  auto cd = complete(decl, env);
  auto mapped = map_completion(cd, {f}, embed(cd, x, env), env);
  auto back = unembed(cd, mapped, env);
  if (!back) throw Error(fmt::format("map over {} left the image of ι", decl.name()));
  return *back;
}

GraphLemmaReport check_graph_lemma(const CheckedDecl &decl, const std::vector<Term> &functions,
                                   int depth, const Env &env,
                                   const std::vector<Term> &extra_values) {
  GraphLemmaReport rep;
  rep.decl = decl.name();
  rep.depth = depth;
  rep.functions = functions.size();
  const bool adt = decl.is_adt();
  std::map<Type, std::vector<Term>> values;
  Lifter l(decl, LiftMode::Completion, env);
  for (const auto &f : functions) {
    if (!f.is(Term::Kind::Fun)) throw CheckError("graph lemma expects function tables");
    const Type &a = f.dom();
    auto it = values.find(a);
    if (it == values.end()) {
      auto xs = enumerate_values(decl, {a}, depth, env);
      for (const auto &v : extra_values) {
        auto t = type_of(v, env);
        if (t.is(Type::Kind::App) && t.name() == decl.name() && t.args().size() == 1 &&
            t.args()[0] == a && std::find(xs.begin(), xs.end(), v) == xs.end())
          xs.push_back(v);
      }
      it = values.emplace(a, std::move(xs)).first;
    }
    Rel g = graph(f, env);
    for (const auto &x : it->second) {
      ++rep.checked;
      GraphLemmaCase cs{f, x, gmap_with(l, decl, g, f, x, env), std::nullopt};
      bool failed = false;
      switch (cs.result.status) {
        case GmapStatus::Defined: ++rep.defined; break;
        case GmapStatus::Undefined: ++rep.undefined; break;
        case GmapStatus::NonUnique: ++rep.nonunique; failed = true; break;
        case GmapStatus::Inconclusive:
          ++rep.inconclusive;
          failed = true;
          if (!cs.result.note.empty()) rep.notes.push_back(cs.result.note);
          break;
      }
      if (adt) {
        cs.expected = adt_map(decl, f, x, env);
        if (cs.result.status != GmapStatus::Defined || !(*cs.result.value == *cs.expected)) {
          ++rep.map_mismatches;
          failed = true;
        }
      }
      if (failed && rep.failures.size() < 10) rep.failures.push_back(std::move(cs));
    }
  }
  return rep;
}

// ---------------------------------------------------------------- Seq-specific

std::optional<SeqShape> seq_shape(const CheckedDecl &decl) {
  if (decl.arity() != 1 || decl.ctors.size() != 2) return std::nullopt;
  SeqShape shape;
  for (const auto &c : decl.ctors) {
    const auto &sig = c.sig;
    if (sig.quantified.size() == 1 && sig.args.size() == 1 &&
        sig.args[0] == Type::var(sig.quantified[0]) &&
        sig.ret_instance[0] == Type::var(sig.quantified[0])) {
      shape.leaf = sig.name;
    } else if (sig.quantified.size() == 2 && sig.args.size() == 2) {
      auto a1 = Type::var(sig.quantified[0]), a2 = Type::var(sig.quantified[1]);
      if (sig.args[0] == Type::app(decl.name(), {a1}) &&
          sig.args[1] == Type::app(decl.name(), {a2}) &&
          sig.ret_instance[0] == Type::prod(a1, a2))
        shape.node = sig.name;
    }
  }
  if (shape.leaf.empty() || shape.node.empty()) return std::nullopt;
  return shape;
}

namespace {

SeqShape require_seq(const CheckedDecl &decl) {
  auto s = seq_shape(decl);
  if (!s) throw CheckError(fmt::format("{} does not have the shape of Seq", decl.name()));
  return *s;
}

MappableResult map_structural(const SeqShape &shape, const Term &f, const Term &s,
                              const Env &env) {
  MappableResult out;
  if (s.ctor() == shape.leaf) {
    auto v = f.apply(s.args()[0]);
    if (!v) {
      out.reason = "leaf outside the function's domain";
      return out;
    }
    out.mappable = true;
    out.result = Term::con(shape.leaf, {f.cod()}, {*v});
    return out;
  }
  const Type &a1 = s.type_args()[0], &a2 = s.type_args()[1];
  if (!f.cod().is(Type::Kind::Prod)) {
    out.reason = fmt::format("{} is not a product type", to_string(f.cod()));
    return out;
  }
  std::map<Term, Term> f1, f2;
  for (const auto &[k, v] : f.table()) {
    auto [i1, new1] = f1.emplace(k.first(), v.first());
    auto [i2, new2] = f2.emplace(k.second(), v.second());
    if ((!new1 && !(i1->second == v.first())) || (!new2 && !(i2->second == v.second()))) {
      out.reason = fmt::format("the function is not of the form f₁ × f₂ over {} at {}",
                               to_string(f.dom()), to_string(s));
      return out;
    }
  }
  auto table = [](const Type &d, const Type &c, const std::map<Term, Term> &m) {
    std::vector<Term::Row> rows(m.begin(), m.end());
    return Term::fun(d, c, std::move(rows));
  };
  Term g1 = table(a1, f.cod().left(), f1);
  Term g2 = table(a2, f.cod().right(), f2);
  auto r1 = map_structural(shape, g1, s.args()[0], env);
  if (!r1.mappable) return r1;
  auto r2 = map_structural(shape, g2, s.args()[1], env);
  if (!r2.mappable) return r2;
  out.mappable = true;
  out.result = Term::con(shape.node, {f.cod().left(), f.cod().right()}, {*r1.result, *r2.result});
  return out;
}

}  // namespace

MappableResult mappable_structural(const CheckedDecl &decl, const Term &f, const Term &s,
                                   const Env &env) {
  auto shape = require_seq(decl);
  function_domain_check(decl, f, s, env);
  return map_structural(shape, f, s, env);
}

bool contains_only(const CheckedDecl &decl, const Term &a, const Term &s) {
  auto shape = require_seq(decl);
  if (!s.is(Term::Kind::Con)) return false;
  if (s.ctor() == shape.leaf) return s.args()[0] == a;
  if (s.ctor() != shape.node || !a.is(Term::Kind::Pair)) return false;
  return contains_only(decl, a.first(), s.args()[0]) &&
         contains_only(decl, a.second(), s.args()[1]);
}

// ---------------------------------------------------------------- free theorem

const Term *CandidatePoly::apply(const Type &a, const Term &v) const {
  for (const auto &[t, rows] : tables)
    if (t == a)
      for (const auto &[k, r] : rows)
        if (k == v) return &r;
  return nullptr;
}

std::vector<Type> CandidatePoly::universe() const {
  std::vector<Type> out;
  for (const auto &[t, _] : tables) out.push_back(t);
  return out;
}

const char *to_string(FreeTheoremVerdict v) {
  switch (v) {
    case FreeTheoremVerdict::Holds: return "Holds";
    case FreeTheoremVerdict::Violated: return "Violated";
    case FreeTheoremVerdict::NotApplicable: return "NotApplicable";
    case FreeTheoremVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

FreeTheoremReport check_free_theorem(const CheckedDecl &seq, const CandidatePoly &cand,
                                     const Env &env) {
  require_seq(seq);
  FreeTheoremReport rep;
  rep.candidate = cand.name;
  Lifter l(seq, LiftMode::Completion, env);
  auto at = [&](const Type &a, const Term &v) -> const Term & {
    const Term *r = cand.apply(a, v);
    if (!r)
      throw CheckError(fmt::format("candidate {} is not total at {} : {}", cand.name,
                                   to_string(v), to_string(a)));
    return *r;
  };
  auto audit = [&](const Rel &r, const Term &a, const Term &b, bool is_delta) {
    const Term &fa = at(r.src(), a);
    const Term &fb = at(r.tgt(), b);
    ++rep.audited;
    auto v = l.check(fa, fb, {r});
    if (v == Verdict::Related) return true;
    if (v == Verdict::Inconclusive) {
      rep.verdict = FreeTheoremVerdict::Inconclusive;
      rep.note = l.last_note();
    } else {
      rep.verdict = FreeTheoremVerdict::NotApplicable;
    }
    rep.failure = AuditFailure{r, a, b, fa, fb, is_delta};
    return false;
  };

  // The instances the proof uses: δ_a relates f_A a to itself.
  for (const auto &[ty, rows] : cand.tables)
    for (const auto &a : carrier(ty, env)) {
      if (!audit(delta(a, ty, env), a, a, true)) return rep;
      rep.delta_instances.push_back(fmt::format("δ_{} on {}: {}lift δ relates {} to itself",
                                                to_string(a), to_string(ty), seq.name(),
                                                to_string(at(ty, a))));
    }
  auto universe = cand.universe();
  for (const auto &a : universe)
    for (const auto &b : universe) {
      try {
        RelSpace sp(a, b, env);
        for (std::uint64_t m = 0; m < sp.count(); ++m) {
          const Rel &r = sp.rel(m);
          for (const auto &[x, y] : r.pairs())
            if (!audit(r, x, y, false)) return rep;
        }
      } catch (const CapError &e) {
        rep.verdict = FreeTheoremVerdict::Inconclusive;
        rep.note = e.what();
        return rep;
      }
    }
  for (const auto &[ty, rows] : cand.tables)
    for (const auto &[a, s] : rows)
      if (!contains_only(seq, a, s)) {
        rep.verdict = FreeTheoremVerdict::Violated;
        rep.counterexample = std::make_pair(a, s);
        return rep;
      }
  rep.verdict = FreeTheoremVerdict::Holds;
  return rep;
}

std::vector<CandidatePoly> enumerate_candidates(const CheckedDecl &seq,
                                                const std::vector<Type> &universe, int depth,
                                                const Env &env) {
  struct Cell {
    Type ty;
    Term a;
    std::vector<Term> options;
  };
  std::vector<Cell> cells;
  std::uint64_t total = 1;
  for (const auto &ty : universe)
    for (const auto &a : carrier(ty, env)) {
      cells.push_back({ty, a, enumerate_values(seq, {ty}, depth, env)});
      total *= cells.back().options.size();
      if (total == 0) return {};
      if (total > static_cast<std::uint64_t>(env.caps().max_rel_enum))
        throw CapError(fmt::format("more than {} candidates (max_rel_enum)",
                                   env.caps().max_rel_enum));
    }
  std::vector<CandidatePoly> out;
  std::vector<std::size_t> idx(cells.size(), 0);
  while (true) {
    CandidatePoly c;
    c.name = fmt::format("candidate#{}", out.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (c.tables.empty() || !(c.tables.back().first == cells[i].ty))
        c.tables.emplace_back(cells[i].ty, std::vector<Term::Row>{});
      c.tables.back().second.emplace_back(cells[i].a, cells[i].options[idx[i]]);
    }
    out.push_back(std::move(c));
    std::size_t p = cells.size();
    bool done = true;
    while (p > 0) {
      --p;
      if (++idx[p] < cells[p].options.size()) {
        done = false;
        break;
      }
      idx[p] = 0;
    }
    if (done) break;
  }
  return out;
}

std::vector<CandidatePoly> example_candidates(const CheckedDecl &seq, const Env &env) {
  auto shape = require_seq(seq);
  auto inj = [&](const Type &ty, const Term &a) { return Term::con(shape.leaf, {ty}, {a}); };
  std::vector<CandidatePoly> out;
  CandidatePoly plain{"inj", {}};
  CandidatePoly corrupt{"inj-corrupt", {}};
  for (const auto &ty : {Type::unit(), Type::boolean()}) {
    std::vector<Term::Row> rows, bad;
    for (const auto &a : carrier(ty, env)) {
      rows.emplace_back(a, inj(ty, a));
      bool flip = ty.is(Type::Kind::Bool) && a.as_bool();
      bad.emplace_back(a, flip ? inj(ty, Term::boolean(false)) : inj(ty, a));
    }
    plain.tables.emplace_back(ty, std::move(rows));
    corrupt.tables.emplace_back(ty, std::move(bad));
  }
  CandidatePoly split{"pairing", {}};
  Type b = Type::boolean(), bb = Type::prod(b, b);
  std::vector<Term::Row> rows;
  for (const auto &a : carrier(bb, env))
    rows.emplace_back(a, Term::con(shape.node, {b, b}, {inj(b, a.first()), inj(b, a.second())}));
  split.tables.emplace_back(bb, std::move(rows));
  out.push_back(std::move(plain));
  out.push_back(std::move(corrupt));
  out.push_back(std::move(split));
  return out;
}

FreeTheoremSweep sweep_free_theorem(const CheckedDecl &seq, const std::vector<Type> &universe,
                                    int depth, const Env &env) {
  FreeTheoremSweep sw;
  for (const auto &c : enumerate_candidates(seq, universe, depth, env)) {
    ++sw.candidates;
    auto r = check_free_theorem(seq, c, env);
    switch (r.verdict) {
      case FreeTheoremVerdict::Holds:
        ++sw.parametric;
        ++sw.conclusion_holds;
        break;
      case FreeTheoremVerdict::Violated:
        ++sw.parametric;
        sw.violations.push_back(std::move(r));
        break;
      case FreeTheoremVerdict::NotApplicable:
        break;
      case FreeTheoremVerdict::Inconclusive:
        ++sw.inconclusive;
        break;
    }
  }
  return sw;
}

}  // namespace gadtparam
