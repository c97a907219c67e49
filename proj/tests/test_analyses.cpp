#include <doctest.h>

#include "common.hpp"
#include "gadtparam/analyses.hpp"
#include "gadtparam/error.hpp"

using namespace gadtparam;

namespace {
const Type B = Type::boolean();
const Type BB = Type::prod(B, B);
Term b(bool v) { return Term::boolean(v); }

struct SeqFixture {
  testutil::Loaded l{testutil::sample("seq.gadt")};
  const CheckedDecl &seq = l.decl("Seq");
};

std::vector<Term> product_functions(const Env &env) {
  std::vector<Term> out;
  auto fs = carrier(Type::arrow(B, B), env);
  for (const auto &f1 : fs)
    for (const auto &f2 : fs) {
      std::vector<Term::Row> rows;
      for (const auto &v : carrier(BB, env))
        rows.emplace_back(v, Term::pair(*f1.apply(v.first()), *f2.apply(v.second())));
      out.push_back(Term::fun(BB, BB, rows));
    }
  return out;
}
}  // namespace

TEST_CASE("inclusion counterexample for the naive lifting") {
  SeqFixture fx;
  auto rep = check_inclusion(fx.seq, LiftMode::Naive, fx.l.rel("R"), fx.l.rel("S"), 2, fx.l.env);
  CHECK(rep.r_included);
  CHECK(rep.violations.size() == 4);
  REQUIRE(rep.first);
  CHECK(rep.first->x == rep.first->y);
  CHECK(rep.first->x.ctor() == "pairing");
  REQUIRE(rep.first->related_under_r);
  for (const auto &[x, y] : rep.violations) {
    CHECK(x == y);
    CHECK(x.ctor() == "pairing");
  }
  auto fixed = check_inclusion(fx.seq, LiftMode::Completion, fx.l.rel("R"), fx.l.rel("S"), 2, fx.l.env);
  CHECK(fixed.violations.empty());
}

TEST_CASE("preservation on small universes") {
  SeqFixture fx;
  auto naive_bool = check_preservation(fx.seq, LiftMode::Naive, {B}, 2, fx.l.env);
  CHECK(naive_bool.passed());
  CHECK(naive_bool.pairs == 81);
  testutil::Loaded tag(testutil::corpus("tag.gadt"));
  auto rep = check_preservation(tag.decl("Tag"), LiftMode::Naive, {B}, 1, tag.env);
  CHECK(rep.verdict() == "FAIL");
  REQUIRE_FALSE(rep.witnesses.empty());
  CHECK(includes(rep.witnesses[0].r, rep.witnesses[0].s));
  auto comp = check_preservation(tag.decl("Tag"), LiftMode::Completion, {B, Type::unit()}, 1, tag.env);
  CHECK(comp.verdict() == "PASS");
}

TEST_CASE("preservation caps are inconclusive") {
  testutil::Loaded l(testutil::sample("seq.gadt"));
  l.env.set_caps(Caps{16, 3, 100});
  auto rep = check_preservation(l.decl("Seq"), LiftMode::Completion, {BB}, 2, l.env);
  CHECK(rep.verdict() == "INCONCLUSIVE");
  CHECK_FALSE(rep.notes.empty());
}

TEST_CASE("gmap on the example") {
  SeqFixture fx;
  auto s = gmap(fx.seq, fx.l.term("fg"), fx.l.term("s"), fx.l.env);
  REQUIRE(s.status == GmapStatus::Defined);
  CHECK(*s.value == fx.l.term("s'"));
  auto t = gmap(fx.seq, fx.l.term("fg"), fx.l.term("t"), fx.l.env);
  REQUIRE(t.status == GmapStatus::Defined);
  CHECK(*t.value == fx.l.term("t'"));
  REQUIRE(t.witness);
  CHECK(t.witness->chosen[0].second.size() == 1);
  CHECK_THROWS_AS(gmap(fx.seq, fx.l.term("g"), fx.l.term("s"), fx.l.env), CheckError);
}

TEST_CASE("shape candidates keep the constructor tree") {
  SeqFixture fx;
  auto cs = shape_candidates(fx.seq, fx.l.term("t"), Type::prod(BB, B), fx.l.env);
  CHECK(cs.size() == 8);
  for (const auto &c : cs) {
    CHECK(c.ctor() == "pairing");
    CHECK(c.args()[0].ctor() == "pairing");
  }
}

TEST_CASE("gmap agrees with map on List") {
  testutil::Loaded l(testutil::sample("list.gadt"));
  const auto &list = l.decl("List");
  for (const auto &f : carrier(Type::arrow(B, B), l.env))
    for (const auto &x : enumerate_values(list, {B}, 2, l.env)) {
      auto r = gmap(list, f, x, l.env);
      REQUIRE(r.status == GmapStatus::Defined);
      CHECK(*r.value == adt_map(list, f, x, l.env));
      CHECK(gmap(list, f, x, l.env, LiftMode::Naive).value == r.value);
    }
}

TEST_CASE("graph lemma") {
  SeqFixture fx;
  auto fs = product_functions(fx.l.env);
  CHECK(fs.size() == 16);
  auto rep = check_graph_lemma(fx.seq, fs, 2, fx.l.env);
  CHECK(rep.passed());
  CHECK(rep.checked == 16 * 8);
  auto all = check_graph_lemma(fx.seq, carrier(Type::arrow(BB, BB), fx.l.env), 2, fx.l.env);
  CHECK(all.passed());
  CHECK(all.functions == 256);
  testutil::Loaded l(testutil::sample("list.gadt"));
  auto lrep = check_graph_lemma(l.decl("List"), carrier(Type::arrow(B, B), l.env), 2, l.env);
  CHECK(lrep.passed());
  CHECK(lrep.map_mismatches == 0);
  CHECK(lrep.defined == lrep.checked);
}

TEST_CASE("structural mappability") {
  SeqFixture fx;
  auto s = mappable_structural(fx.seq, fx.l.term("fg"), fx.l.term("s"), fx.l.env);
  CHECK(s.mappable);
  CHECK(*s.result == fx.l.term("s'"));
  auto t = mappable_structural(fx.seq, fx.l.term("fg"), fx.l.term("t"), fx.l.env);
  CHECK_FALSE(t.mappable);
  CHECK(t.reason.find("f₁ × f₂") != std::string::npos);
  auto inj = Term::con("inj", {B}, {b(true)});
  auto neg = fx.l.term("g");
  CHECK(*mappable_structural(fx.seq, neg, inj, fx.l.env).result == Term::con("inj", {B}, {b(false)}));
}

TEST_CASE("gmap extends structural mapping") {
  SeqFixture fx;
  auto fs = product_functions(fx.l.env);
  fs.push_back(fx.l.term("f"));
  for (const auto &f : carrier(Type::arrow(BB, BB), fx.l.env)) {
    for (const auto &x : enumerate_values(fx.seq, {BB}, 2, fx.l.env)) {
      auto m = mappable_structural(fx.seq, f, x, fx.l.env);
      if (!m.mappable) continue;
      auto g = gmap(fx.seq, f, x, fx.l.env);
      REQUIRE(g.status == GmapStatus::Defined);
      CHECK(*g.value == *m.result);
    }
  }
}

TEST_CASE("contains_only matches the delta lifting") {
  SeqFixture fx;
  int agree = 0;
  for (const auto &a : {B, BB, Type::prod(BB, B)}) {
    auto xs = enumerate_values(fx.seq, {a}, 2, fx.l.env);
    Lifter l(fx.seq, LiftMode::Completion, fx.l.env);
    for (const auto &v : carrier(a, fx.l.env)) {
      auto d = delta(v, a, fx.l.env);
      for (const auto &x : xs) {
        CHECK(contains_only(fx.seq, v, x) == (l.check(x, x, {d}) == Verdict::Related));
        ++agree;
      }
    }
  }
  CHECK(agree > 100);
  CHECK(contains_only(fx.seq, Term::pair(Term::pair(b(true), b(false)), b(true)), fx.l.term("t")));
  CHECK_FALSE(contains_only(fx.seq, Term::pair(Term::pair(b(true), b(true)), b(true)), fx.l.term("t")));
}

TEST_CASE("free theorem examples") {
  SeqFixture fx;
  auto cands = example_candidates(fx.seq, fx.l.env);
  REQUIRE(cands.size() == 3);
  auto inj = check_free_theorem(fx.seq, cands[0], fx.l.env);
  CHECK(inj.verdict == FreeTheoremVerdict::Holds);
  auto bad = check_free_theorem(fx.seq, cands[1], fx.l.env);
  CHECK(bad.verdict == FreeTheoremVerdict::NotApplicable);
  REQUIRE(bad.failure);
  CHECK(bad.failure->delta_instance);
  CHECK(bad.failure->r == delta(b(true), B, fx.l.env));
  auto split = check_free_theorem(fx.seq, cands[2], fx.l.env);
  CHECK(split.verdict == FreeTheoremVerdict::Holds);
  CHECK(split.audited > 65536);
}

TEST_CASE("a parametric candidate never breaks the conclusion") {
  SeqFixture fx;
  auto sw = sweep_free_theorem(fx.seq, {Type::unit(), B}, 1, fx.l.env);
  CHECK(sw.passed());
  CHECK(sw.candidates == 4);
  CHECK(sw.parametric >= 1);
  CHECK(sw.conclusion_holds == sw.parametric);
  auto bb = sweep_free_theorem(fx.seq, {BB}, 1, fx.l.env);
  CHECK(bb.passed());
  CHECK(bb.candidates == 4096);
  CHECK(bb.conclusion_holds == bb.parametric);
  CHECK(bb.parametric >= 2);
}

TEST_CASE("Seq-only analyses reject other shapes") {
  testutil::Loaded l(testutil::sample("list.gadt"));
  CHECK_FALSE(seq_shape(l.decl("List")).has_value());
  CHECK_THROWS_AS(mappable_structural(l.decl("List"), l.term("not"), l.term("xs"), l.env), CheckError);
}
