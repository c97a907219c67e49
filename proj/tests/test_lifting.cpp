#include <doctest.h>

#include <random>

#include "common.hpp"
#include "gadtparam/error.hpp"
#include "gadtparam/lifting.hpp"

using namespace gadtparam;

namespace {
const Type B = Type::boolean();
const Type BB = Type::prod(B, B);
Term b(bool v) { return Term::boolean(v); }

// --- Seq oracles, written against the term structure only

bool same_shape(const Term &x, const Term &y) {
  if (x.ctor() != y.ctor()) return false;
  if (x.ctor() == "inj") return true;
  return same_shape(x.args()[0], y.args()[0]) && same_shape(x.args()[1], y.args()[1]);
}

// the element of A a sequence carries
Term data_of(const Term &x) {
  if (x.ctor() == "inj") return x.args()[0];
  return Term::pair(data_of(x.args()[0]), data_of(x.args()[1]));
}

bool seq_completion_oracle(const Rel &r, const Term &x, const Term &y) {
  return same_shape(x, y) && r.contains(data_of(x), data_of(y));
}

std::optional<std::pair<Rel, Rel>> split_product(const Rel &r) {
  if (r.empty() || !r.src().is(Type::Kind::Prod) || !r.tgt().is(Type::Kind::Prod))
    return std::nullopt;
  std::vector<Rel::Pair> l, rr;
  for (const auto &[a, c] : r.pairs()) {
    l.emplace_back(a.first(), c.first());
    rr.emplace_back(a.second(), c.second());
  }
  Rel r1(r.src().left(), r.tgt().left(), l), r2(r.src().right(), r.tgt().right(), rr);
  if (!(product_rel(r1, r2) == r)) return std::nullopt;
  return std::make_pair(r1, r2);
}

bool seq_naive_oracle(const Rel &r, const Term &x, const Term &y) {
  if (x.ctor() != y.ctor()) return false;
  if (x.ctor() == "inj") return r.contains(x.args()[0], y.args()[0]);
  auto parts = split_product(r);
  return parts && seq_naive_oracle(parts->first, x.args()[0], y.args()[0]) &&
         seq_naive_oracle(parts->second, x.args()[1], y.args()[1]);
}

bool list_oracle(const Rel &r, const Term &x, const Term &y) {
  if (x.ctor() != y.ctor()) return false;
  if (x.ctor() == "nil") return true;
  return r.contains(x.args()[0], y.args()[0]) && list_oracle(r, x.args()[1], y.args()[1]);
}

std::vector<Rel> sample_rels(const Type &a, const Env &env, std::size_t n, unsigned seed) {
  auto ca = carrier(a, env);
  std::vector<Rel> out{Rel(a, a, {}), eq_rel(a, env), full_rel(a, a, env)};
  std::mt19937 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Rel::Pair> ps;
    int density = 1 + rng() % 4;
    for (const auto &x : ca)
      for (const auto &y : ca)
        if (static_cast<int>(rng() % 8) < density) ps.emplace_back(x, y);
    out.emplace_back(a, a, ps);
  }
  return out;
}

struct SeqFixture {
  testutil::Loaded l{testutil::sample("seq.gadt")};
  const CheckedDecl &seq = l.decl("Seq");
};
}  // namespace

TEST_CASE("rule shapes") {
  SeqFixture fx;
  auto naive = derive_rules(fx.seq, LiftMode::Naive, fx.l.env);
  CHECK(naive.family == "Seqlift");
  REQUIRE(naive.rules.size() == 2);
  CHECK(naive.rules[1].name == "p̂airinglift");
  CHECK(naive.rules[1].conclusion[0] == Type::prod(Type::var("α₁"), Type::var("α₂")));
  auto text = print_rules(naive);
  CHECK(text.find("Seqlift (R₁ ×̂ R₂) (pairing x₁ x₂) (pairing y₁ y₂)") != std::string::npos);
  CHECK(text.find("Seqlift R₁ x₁ y₁    Seqlift R₂ x₂ y₂") != std::string::npos);

  auto comp = derive_rules(fx.seq, LiftMode::Completion, fx.l.env);
  CHECK(comp.decl == "Seq_c");
  auto ctext = print_rules(comp);
  CHECK(ctext.find("(R₁ ×̂ R₂ →̂ R) x₁ y₁") != std::string::npos);
  CHECK(ctext.find("Seq_clift R (pairing_c x₁ x₂ x₃) (pairing_c y₁ y₂ y₃)") != std::string::npos);
}

TEST_CASE("example witness for s") {
  SeqFixture fx;
  Rel r = graph(fx.l.term("fg"), fx.l.env);
  auto res = lift_check(fx.seq, LiftMode::Completion, r, fx.l.term("s"), fx.l.term("s'"), fx.l.env, true);
  REQUIRE(res.verdict == Verdict::Related);
  REQUIRE(res.witness);
  const auto &d = *res.witness;
  CHECK(d.rule == "p̂airing_clift");
  REQUIRE(d.chosen.size() == 3);
  CHECK(d.chosen[0].second == graph(fx.l.term("f"), fx.l.env));
  CHECK(d.chosen[1].second == graph(fx.l.term("g"), fx.l.env));
  CHECK(d.chosen[2].second == r);
  CHECK(d.children.size() == 2);
  Lifter l(fx.seq, LiftMode::Completion, fx.l.env);
  CHECK(replay(d, fx.l.env, l.rule_decl()).ok);
}

TEST_CASE("example witness for t") {
  SeqFixture fx;
  Rel r = graph(fx.l.term("fg"), fx.l.env);
  auto res = lift_check(fx.seq, LiftMode::Completion, r, fx.l.term("t"), fx.l.term("t'"), fx.l.env, true);
  REQUIRE(res.verdict == Verdict::Related);
  const auto &d = *res.witness;
  Term tf = Term::pair(b(true), b(false)), ft = Term::pair(b(false), b(true));
  CHECK(d.chosen[0].second == Rel(BB, BB, {{tf, ft}}));
  CHECK(includes(d.chosen[0].second, graph(fx.l.term("f"), fx.l.env)));
  CHECK_FALSE(d.chosen[0].second == graph(fx.l.term("f"), fx.l.env));
  CHECK(d.chosen[1].second == graph(fx.l.term("g"), fx.l.env));
  REQUIRE(d.children.size() == 2);
  const auto &inner = d.children[0];
  CHECK(inner.chosen[0].second == Rel(B, B, {{b(true), b(false)}}));
  CHECK(inner.chosen[1].second == Rel(B, B, {{b(false), b(true)}}));
  Lifter l(fx.seq, LiftMode::Completion, fx.l.env);
  CHECK(replay(d, fx.l.env, l.rule_decl()).ok);
  auto text = print_witness(d);
  CHECK(text.find("p̂airing_clift") == 0);
  CHECK(text.find("where\n") != std::string::npos);
}

TEST_CASE("tampered derivations fail replay") {
  SeqFixture fx;
  Rel r = graph(fx.l.term("fg"), fx.l.env);
  auto d = *lift_check(fx.seq, LiftMode::Completion, r, fx.l.term("s"), fx.l.term("s'"), fx.l.env, true).witness;
  Lifter l(fx.seq, LiftMode::Completion, fx.l.env);
  auto bad = d;
  bad.chosen[1].second = eq_rel(B, fx.l.env);
  CHECK_FALSE(replay(bad, fx.l.env, l.rule_decl()).ok);
  bad = d;
  bad.children.pop_back();
  CHECK_FALSE(replay(bad, fx.l.env, l.rule_decl()).ok);
}

TEST_CASE("naive lifting of S relates no pairing terms") {
  SeqFixture fx;
  const Rel &s = fx.l.rel("S");
  auto xs = enumerate_values(fx.seq, {BB}, 2, fx.l.env);
  int pairs = 0;
  for (const auto &x : xs)
    for (const auto &y : xs)
      if (x.ctor() == "pairing" && y.ctor() == "pairing") {
        CHECK(lift_check(fx.seq, LiftMode::Naive, s, x, y, fx.l.env).verdict == Verdict::NotRelated);
        CHECK(lift_check(fx.seq, LiftMode::Naive, fx.l.rel("R"), x, y, fx.l.env).verdict ==
              (x == y ? Verdict::Related : Verdict::NotRelated));
        CHECK(lift_check(fx.seq, LiftMode::Completion, s, x, y, fx.l.env).verdict ==
              (seq_completion_oracle(s, x, y) ? Verdict::Related : Verdict::NotRelated));
        ++pairs;
      }
  CHECK(pairs == 16);
}

TEST_CASE("Seq liftings agree with the oracles") {
  SeqFixture fx;
  for (const auto &a : {B, BB, Type::prod(BB, B)}) {
    auto xs = enumerate_values(fx.seq, {a}, 2, fx.l.env);
    auto rels = sample_rels(a, fx.l.env, a == BB ? 40 : 0, 11);
    if (a == B)
      for (const auto &r : enumerate_rels(B, B, fx.l.env)) rels.push_back(r);
    else if (a != BB)
      rels.push_back(graph(fx.l.term("fg"), fx.l.env));
    Lifter naive(fx.seq, LiftMode::Naive, fx.l.env);
    Lifter comp(fx.seq, LiftMode::Completion, fx.l.env);
    for (const auto &r : rels)
      for (const auto &x : xs)
        for (const auto &y : xs) {
          CAPTURE(to_string(x));
          CAPTURE(to_string(y));
          CHECK((naive.check(x, y, {r}) == Verdict::Related) == seq_naive_oracle(r, x, y));
          CHECK((comp.check(x, y, {r}) == Verdict::Related) == seq_completion_oracle(r, x, y));
        }
  }
}

TEST_CASE("every derivation replays") {
  SeqFixture fx;
  auto xs = enumerate_values(fx.seq, {Type::prod(BB, B)}, 2, fx.l.env);
  auto rels = sample_rels(Type::prod(BB, B), fx.l.env, 6, 5);
  for (auto mode : {LiftMode::Naive, LiftMode::Completion}) {
    Lifter l(fx.seq, mode, fx.l.env);
    int related = 0;
    for (const auto &r : rels)
      for (std::size_t i = 0; i < xs.size(); i += 3)
        for (std::size_t j = 0; j < xs.size(); j += 2) {
          auto res = l.check_with_witness(xs[i], xs[j], {r});
          if (res.verdict != Verdict::Related) continue;
          REQUIRE(res.witness);
          auto rep = replay(*res.witness, fx.l.env, l.rule_decl());
          CHECK_MESSAGE(rep.ok, rep.error);
          ++related;
        }
    CHECK(related > 0);
  }
}

TEST_CASE("List lifting is elementwise in both modes") {
  testutil::Loaded l(testutil::sample("list.gadt"));
  const auto &list = l.decl("List");
  auto xs = enumerate_values(list, {B}, 2, l.env);
  for (const auto &r : enumerate_rels(B, B, l.env)) {
    auto n = lift_relation(list, LiftMode::Naive, r, 2, l.env);
    auto c = lift_relation(list, LiftMode::Completion, r, 2, l.env);
    CHECK(n == c);
    for (const auto &x : xs)
      for (const auto &y : xs) CHECK(n.contains(x, y) == list_oracle(r, x, y));
  }
}

TEST_CASE("equality lifts to equality") {
  SeqFixture fx;
  for (const auto &a : {B, BB, Type::prod(BB, B)}) {
    auto xs = enumerate_values(fx.seq, {a}, 2, fx.l.env);
    for (auto mode : {LiftMode::Naive, LiftMode::Completion}) {
      Lifter l(fx.seq, mode, fx.l.env);
      std::size_t stride = a == B || mode == LiftMode::Naive ? 1 : 5;
      for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i % stride; j < xs.size(); j += stride)
          CHECK((l.check(xs[i], xs[j], {eq_rel(a, fx.l.env)}) == Verdict::Related) == (i == j));
    }
  }
  for (const char *name : {"expr.gadt", "tag.gadt", "fun.gadt"}) {
    testutil::Loaded c(testutil::corpus(name));
    const auto &d = c.decl(c.file.decls()[0].name);
    Lifter l(d, LiftMode::Completion, c.env);
    for (const auto &x : enumerate_values(d, {B}, 1, c.env)) {
      CAPTURE(to_string(x));
      CHECK(l.check(x, x, {eq_rel(B, c.env)}) == Verdict::Related);
    }
  }
}

TEST_CASE("constructors are parametric") {
  SeqFixture fx;
  auto bs = enumerate_values(fx.seq, {B}, 0, fx.l.env);
  Lifter l(fx.seq, LiftMode::Completion, fx.l.env);
  auto rels = enumerate_rels(B, B, fx.l.env);
  for (std::uint64_t m1 = 0; m1 < 16; ++m1)
    for (std::uint64_t m2 = 0; m2 < 16; m2 += 3) {
      const Rel &r1 = rels.rel(m1), &r2 = rels.rel(m2);
      for (const auto &x1 : bs)
        for (const auto &y1 : bs)
          for (const auto &x2 : bs)
            for (const auto &y2 : bs) {
              if (l.check(x1, y1, {r1}) != Verdict::Related) continue;
              if (l.check(x2, y2, {r2}) != Verdict::Related) continue;
              auto x = Term::con("pairing", {B, B}, {x1, x2});
              auto y = Term::con("pairing", {B, B}, {y1, y2});
              CHECK(l.check(x, y, {product_rel(r1, r2)}) == Verdict::Related);
            }
      for (const auto &[p, q] : r1.pairs())
        CHECK(l.check(Term::con("inj", {B}, {p}), Term::con("inj", {B}, {q}), {r1}) ==
              Verdict::Related);
    }
}

TEST_CASE("completion lifting preserves inclusion on the corpus") {
  for (const char *name : {"expr.gadt", "tag.gadt", "fun.gadt"}) {
    testutil::Loaded c(testutil::corpus(name));
    const auto &d = c.decl(c.file.decls()[0].name);
    auto sp = enumerate_rels(B, B, c.env);
    std::vector<Rel> lifted;
    for (std::uint64_t m = 0; m < 16; ++m) lifted.push_back(lift_relation(d, LiftMode::Completion, sp.rel(m), 1, c.env));
    for (std::uint64_t r = 0; r < 16; ++r)
      for (std::uint64_t s = 0; s < 16; ++s)
        if ((r & s) == r) CHECK(includes(lifted[r], lifted[s]));
  }
}

TEST_CASE("naive lifting is not monotone on Tag") {
  testutil::Loaded c(testutil::corpus("tag.gadt"));
  const auto &tag = c.decl("Tag");
  auto tb = Term::con("tb", {}, {});
  CHECK(lift_check(tag, LiftMode::Naive, eq_rel(B, c.env), tb, tb, c.env).verdict == Verdict::Related);
  CHECK(lift_check(tag, LiftMode::Naive, full_rel(B, B, c.env), tb, tb, c.env).verdict == Verdict::NotRelated);
  CHECK(lift_check(tag, LiftMode::Completion, full_rel(B, B, c.env), tb, tb, c.env).verdict == Verdict::Related);
}

TEST_CASE("type errors are reported") {
  SeqFixture fx;
  CHECK_THROWS_AS(lift_check(fx.seq, LiftMode::Naive, eq_rel(B, fx.l.env), fx.l.term("s"), fx.l.term("s"), fx.l.env),
                  CheckError);
}

TEST_CASE("cap exhaustion is inconclusive") {
  SeqFixture fx;
  Env tight(Caps{16, 3, 4});
  parse_source(testutil::slurp(testutil::sample("seq.gadt")), tight);
  auto res = lift_check(*tight.find_decl("Seq"), LiftMode::Completion,
                        graph(fx.l.term("fg"), fx.l.env), fx.l.term("t"), fx.l.term("t'"), tight);
  CHECK(res.verdict == Verdict::Inconclusive);
  CHECK_FALSE(res.note.empty());
  CHECK_THROWS_AS(lift_relation(*tight.find_decl("Seq"), LiftMode::Completion, eq_rel(BB, fx.l.env), 2, tight),
                  CapError);
}
