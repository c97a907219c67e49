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

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include <fmt/core.h>

#include "gadtparam/analyses.hpp"
#include "gadtparam/completion.hpp"
#include "gadtparam/error.hpp"
#include "gadtparam/lifting.hpp"
#include "gadtparam/parser.hpp"
#include "gadtparam/relations.hpp"

using namespace gadtparam;

namespace {

std::string slurp(const std::string &path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Loaded {
  Env env;
  SourceFile file;
  explicit Loaded(const char *name) {
    std::string path = std::string(GADTPARAM_SAMPLES_DIR) + "/" + name;
    file = parse_source(slurp(path), env, path);
  }
  const Term &term(const std::string &n) const { return *file.find_term(n); }
  const Rel &rel(const std::string &n) const { return *file.find_rel(n); }
  const CheckedDecl &decl(const std::string &n) const { return *env.find_decl(n); }
};

const Type B = Type::boolean();
const Type BB = Type::prod(B, B);

// f₁ × f₂ over a product carrier
std::vector<Term> product_functions(const Type &a, const Env &env) {
  std::vector<Term> out;
  for (const auto &f1 : carrier(Type::arrow(a.left(), a.left()), env))
    for (const auto &f2 : carrier(Type::arrow(a.right(), a.right()), env)) {
      std::vector<Term::Row> rows;
      for (const auto &v : carrier(a, env))
        rows.emplace_back(v, Term::pair(*f1.apply(v.first()), *f2.apply(v.second())));
      out.push_back(Term::fun(a, a, std::move(rows)));
    }
  return out;
}

// detail is filled on the way; a non-empty `why` means failure
struct Outcome {
  std::string detail;
  std::string why;
  void need(bool ok, const std::string &what) {
    if (!ok && why.empty()) why = what;
  }
};

int failures = 0;

void criterion(int n, const char *name, double budget_s, const std::function<void(Outcome &)> &body) {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception &e) {
    o.why = fmt::format("exception: {}", e.what());
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (o.why.empty() && secs > budget_s) o.why = fmt::format("over budget of {}s", budget_s);
  bool ok = o.why.empty();
  if (!ok) ++failures;
  fmt::print("{} {} {} ({:.2f}s) {}\n", ok ? "PASS" : "FAIL", n, name, secs, ok ? o.detail : o.why);
  std::fflush(stdout);
}

}  // namespace

int main() {
  Loaded seqf("seq.gadt");
  Loaded listf("list.gadt");
  const CheckedDecl &seq = seqf.decl("Seq");
  const CheckedDecl &list = listf.decl("List");
  const Env &env = seqf.env;

  criterion(1, "naive-lifting-counterexample", 5, [&](Outcome &o) {
    PreservationOptions po;
    po.focus = std::make_pair(seqf.rel("R"), seqf.rel("S"));
    auto rep = check_preservation(seq, LiftMode::Naive, {BB}, 2, env, po);
    o.need(rep.verdict() == "FAIL", "naive lifting preserved inclusion");
    o.need(rep.focus && rep.focus->r_included, "R is not included in S");
    o.need(rep.focus && !rep.focus->violations.empty(), "no violation for the focus pair");
    if (rep.focus && rep.focus->first) {
      const auto &w = *rep.focus->first;
      o.need(w.x == w.y && w.x.ctor() == "pairing", "witness is not a pairing term related to itself");
      o.need(w.related_under_r.has_value(), "witness lacks an R derivation");
      o.detail = fmt::format("{} violations, focus {}", rep.violations, rep.focus->violations.size());
    } else {
      o.need(false, "no focus witness");
    }
  });

  criterion(2, "completion-preserves-inclusion", 60, [&](Outcome &o) {
    auto rep = check_preservation(seq, LiftMode::Completion, {B, BB}, 2, env);
    o.need(rep.passed(), fmt::format("{} violations, {} inconclusive", rep.violations, rep.inconclusive));
    o.detail = fmt::format("{} relations, {} pairs", rep.relations, rep.pairs);
  });

  criterion(3, "adt-agreement", 5, [&](Outcome &o) {
    const Env &lenv = listf.env;
    auto rels = enumerate_rels(B, B, lenv);
    std::size_t n = 0;
    for (const auto &r : rels) {
      auto a = lift_relation(list, LiftMode::Naive, r, 2, lenv);
      auto b = lift_relation(list, LiftMode::Completion, r, 2, lenv);
      o.need(a == b, "naive and completion liftings differ on List");
      ++n;
    }
    auto xs = enumerate_values(list, {B}, 2, lenv);
    std::size_t fs = 0;
    for (const auto &f : carrier(Type::arrow(B, B), lenv)) {
      auto lifted = lift_relation(list, LiftMode::Completion, graph(f, lenv), 2, lenv);
      std::vector<Rel::Pair> pairs;
      for (const auto &x : xs) pairs.emplace_back(x, adt_map(list, f, x, lenv));
      Rel expect(lifted.src(), lifted.tgt(), pairs);
      o.need(includes(lifted, expect) && includes(expect, lifted), "lifted graph is not the graph of map");
      ++fs;
    }
    o.need(n == 16 && fs == 4, "wrong relation or function count");
    o.detail = fmt::format("{} relations, {} functions, {} values", n, fs, xs.size());
  });

  criterion(4, "gmap-and-mappability", 5, [&](Outcome &o) {
    const Term &fg = seqf.term("fg");
    auto s = gmap(seq, fg, seqf.term("s"), env);
    auto t = gmap(seq, fg, seqf.term("t"), env);
    o.need(s.status == GmapStatus::Defined && s.value == seqf.term("s'"), "gmap fg s is not s'");
    o.need(t.status == GmapStatus::Defined && t.value == seqf.term("t'"), "gmap fg t is not t'");
    Rel gf = graph(seqf.term("f"), env), gg = graph(seqf.term("g"), env);
    o.need(s.witness && s.witness->chosen.size() >= 2 && s.witness->chosen[0].second == gf &&
               s.witness->chosen[1].second == gg,
           "s witness does not pick graph f and graph g");
    o.need(t.witness && t.witness->chosen.size() >= 2 && t.witness->chosen[0].second.size() == 1 &&
               t.witness->chosen[1].second == gg,
           "t witness does not pick a singleton and graph g");
    auto cd = *find_completion(env, "Seq");
    if (s.witness) o.need(replay(*s.witness, env, cd.completed).ok, "s witness does not replay");
    if (t.witness) o.need(replay(*t.witness, env, cd.completed).ok, "t witness does not replay");
    auto ms = mappable_structural(seq, fg, seqf.term("s"), env);
    auto mt = mappable_structural(seq, fg, seqf.term("t"), env);
    o.need(ms.mappable && ms.result == seqf.term("s'"), "s is not structurally mappable to s'");
    o.need(!mt.mappable, "t is structurally mappable");
    o.detail = "s' and t' recovered; s Defined, t NotMappable";
  });

  criterion(5, "graph-lemma", 60, [&](Outcome &o) {
    auto prod = check_graph_lemma(seq, product_functions(BB, env), 2, env);
    auto all = check_graph_lemma(seq, carrier(Type::arrow(BB, BB), env), 2, env);
    // (f₁ × f₂) × g at depth 3
    const Type BBB = Type::prod(BB, B);
    std::vector<Term> spot_fs;
    for (const auto &f : product_functions(BB, env))
      for (const auto &g : carrier(Type::arrow(B, B), env)) {
        std::vector<Term::Row> rows;
        for (const auto &v : carrier(BBB, env))
          rows.emplace_back(v, Term::pair(*f.apply(v.first()), *g.apply(v.second())));
        spot_fs.push_back(Term::fun(BBB, BBB, std::move(rows)));
      }
    auto spot = check_graph_lemma(seq, spot_fs, 3, env);
    o.need(prod.passed() && prod.functions == 16, "product functions at depth 2");
    o.need(all.passed() && all.functions == 256, "all functions at depth 2");
    o.need(spot.passed() && spot.functions == 64, "depth 3 spot set");
    o.detail = fmt::format("{}+{}+{} cases, {} defined", prod.checked, all.checked, spot.checked,
                           prod.defined + all.defined + spot.defined);
  });

  criterion(6, "free-theorem", 60, [&](Outcome &o) {
    auto cands = example_candidates(seq, env);
    o.need(cands.size() == 3, "expected three example candidates");
    if (cands.size() == 3) {
      auto inj = check_free_theorem(seq, cands[0], env);
      auto bad = check_free_theorem(seq, cands[1], env);
      auto pr = check_free_theorem(seq, cands[2], env);
      o.need(inj.verdict == FreeTheoremVerdict::Holds, "inj");
      o.need(bad.verdict == FreeTheoremVerdict::NotApplicable && bad.failure &&
                 bad.failure->delta_instance,
             "corrupted candidate is not refuted by a δ instance");
      o.need(pr.verdict == FreeTheoremVerdict::Holds, "pairing");
    }
    auto sweep = sweep_free_theorem(seq, {Type::unit(), B}, 1, env);
    o.need(sweep.passed() && sweep.parametric > 0 && sweep.conclusion_holds == sweep.parametric,
           "sweep");
    o.detail = fmt::format("sweep {} candidates, {} parametric", sweep.candidates, sweep.parametric);
  });

  criterion(7, "invariants", 60, [&](Outcome &o) {
    auto cd = *find_completion(env, "Seq");
    std::size_t checks = 0;
    // constructor rule: inj a ~ inj b iff R a b
    for (const auto &r : enumerate_rels(B, B, env))
      for (const auto &a : carrier(B, env))
        for (const auto &b : carrier(B, env)) {
          auto x = Term::con("inj", {B}, {a});
          auto y = Term::con("inj", {B}, {b});
          for (auto mode : {LiftMode::Naive, LiftMode::Completion}) {
            bool rel = lift_check(seq, mode, r, x, y, env).verdict == Verdict::Related;
            o.need(rel == r.contains(a, b), "inj rule");
            ++checks;
          }
        }
    // monotonicity on Bool, both modes
    for (auto mode : {LiftMode::Naive, LiftMode::Completion}) {
      o.need(check_preservation(seq, mode, {B}, 2, env).passed(), "monotonicity on Bool");
      ++checks;
    }
    // equality is reflexive after lifting
    auto xs = enumerate_values(seq, {BB}, 2, env);
    Lifter lc(seq, LiftMode::Completion, env);
    Rel eq = eq_rel(BB, env);
    for (const auto &x : xs) {
      o.need(lc.check(x, x, {eq}) == Verdict::Related, "equality reflexivity");
      ++checks;
    }
    // ι injective with inverse
    std::set<Term> images;
    for (const auto &x : xs) {
      auto e = embed(cd, x, env);
      o.need(images.insert(e).second, "ι not injective");
      o.need(unembed(cd, e, env) == x, "ι has no inverse on its image");
      ++checks;
    }
    // functor laws on the completion
    auto cxs = enumerate_values(cd.completed, {B}, 1, env);
    auto fs = carrier(Type::arrow(B, B), env);
    Term id = identity_table(B, carrier(B, env));
    for (const auto &x : cxs) {
      o.need(map_completion(cd, {id}, x, env) == x, "map id");
      for (const auto &f : fs)
        for (const auto &g : fs) {
          o.need(map_completion(cd, {compose_tables(g, f)}, x, env) ==
                     map_completion(cd, {g}, map_completion(cd, {f}, x, env), env),
                 "map composition");
          ++checks;
        }
    }
    // witnesses replay, tampering is caught
    auto w = lift_check(seq, LiftMode::Completion, graph(seqf.term("fg"), env), seqf.term("t"),
                        seqf.term("t'"), env, true);
    o.need(w.verdict == Verdict::Related && w.witness && replay(*w.witness, env, cd.completed).ok,
           "replay");
    if (w.witness) {
      auto bad = *w.witness;
      bad.rhs = seqf.term("t");
      o.need(!replay(bad, env, cd.completed).ok, "tampered witness replays");
    }
    // printer round trip
    auto text = print(seqf.file);
    Env env2;
    o.need(print(parse_source(text, env2)) == text, "round trip");
    checks += 3;
    o.detail = fmt::format("{} checks", checks);
  });

  return failures == 0 ? 0 : 1;
}
