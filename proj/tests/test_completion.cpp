#include <doctest.h>

#include "common.hpp"
#include "gadtparam/completion.hpp"
#include "gadtparam/error.hpp"
#include "gadtparam/printer.hpp"

using namespace gadtparam;

namespace {
const Type B = Type::boolean();
const Type BB = Type::prod(B, B);
Term b(bool v) { return Term::boolean(v); }
Term neg_table() { return Term::fun(B, B, {{b(false), b(true)}, {b(true), b(false)}}); }
}  // namespace

TEST_CASE("completion of Seq") {
  testutil::Loaded l(testutil::sample("seq.gadt"));
  auto cd = complete(l.decl("Seq"), l.env);
  CHECK(cd.completed.name() == "Seq_c");
  CHECK(to_string(cd.completed.decl) ==
        "data Seq_c : Set → Set where\n"
        "  inj_c : ∀{α} → α → Seq_c α\n"
        "  pairing_c : ∀{α₁ α₂ β} → (α₁ × α₂ → β) → Seq_c α₁ → Seq_c α₂ → Seq_c β\n");
  CHECK_FALSE(cd.by_original("inj")->rewritten);
  CHECK(cd.by_original("pairing")->rewritten);
  CHECK(cd.by_completed("pairing_c")->original == "pairing");
  for (const auto &c : cd.completed.ctors) {
    std::set<Type> seen;
    for (const auto &t : c.sig.ret_instance) {
      CHECK(t.is(Type::Kind::Var));
      CHECK(seen.insert(t).second);
    }
  }
}

TEST_CASE("adt completion keeps every constructor") {
  testutil::Loaded l(testutil::sample("list.gadt"));
  auto cd = complete(l.decl("List"), l.env);
  for (const auto &c : cd.ctor_map) CHECK_FALSE(c.rewritten);
  CHECK(cd.completed.ctors.size() == 2);
}

TEST_CASE("one arrow per index") {
  testutil::Loaded l(testutil::corpus("same.gadt"));
  auto cd = complete(l.decl("Same"), l.env);
  const auto *refl = cd.completed.find("refl_c");
  REQUIRE(refl);
  CHECK(refl->sig.args.size() == 3);
  CHECK(refl->sig.args[0].is(Type::Kind::Arrow));
  CHECK(refl->sig.args[1].is(Type::Kind::Arrow));
  CHECK(refl->sig.ret_instance.size() == 2);
  CHECK_FALSE(refl->sig.ret_instance[0] == refl->sig.ret_instance[1]);
}

TEST_CASE("completion is idempotent up to naming") {
  for (const char *name : {"expr.gadt", "tag.gadt", "same.gadt", "fun.gadt"}) {
    testutil::Loaded l(testutil::corpus(name));
    auto d = l.file.decls()[0];
    auto cd = complete(l.decl(d.name), l.env);
    auto twice = complete(cd.completed, l.env);
    for (const auto &c : twice.ctor_map) CHECK_FALSE(c.rewritten);
    REQUIRE(twice.completed.ctors.size() == cd.completed.ctors.size());
    for (std::size_t i = 0; i < cd.completed.ctors.size(); ++i) {
      CHECK(twice.completed.ctors[i].sig.args.size() == cd.completed.ctors[i].sig.args.size());
      CHECK(twice.completed.ctors[i].sig.quantified == cd.completed.ctors[i].sig.quantified);
    }
  }
}

TEST_CASE("embedding inserts identities") {
  testutil::Loaded l(testutil::sample("seq.gadt"));
  auto cd = *find_completion(l.env, "Seq");
  auto x = embed(cd, l.term("s"), l.env);
  CHECK(x.ctor() == "pairing_c");
  CHECK(x.type_args().size() == 3);
  CHECK(x.args()[0] == identity_table(Type::prod(BB, B), carrier(Type::prod(BB, B), l.env)));
  CHECK(x.args()[1].ctor() == "inj_c");
  CHECK(type_of(x, l.env) == Type::app("Seq_c", {Type::prod(BB, B)}));
  CHECK(*unembed(cd, x, l.env) == l.term("s"));
}

TEST_CASE("embedding is injective with a partial inverse") {
  testutil::Loaded l(testutil::sample("seq.gadt"));
  auto cd = *find_completion(l.env, "Seq");
  for (const auto &ty : {B, BB, Type::prod(BB, B), Type::prod(B, BB)}) {
    auto xs = enumerate_values(l.decl("Seq"), {ty}, 2, l.env);
    std::set<Term> images;
    for (const auto &x : xs) {
      auto e = embed(cd, x, l.env);
      images.insert(e);
      auto back = unembed(cd, e, l.env);
      REQUIRE(back);
      CHECK(*back == x);
    }
    CHECK(images.size() == xs.size());
  }
  auto stray = map_completion(cd, {Term::fun(BB, BB, {{Term::pair(b(false), b(false)), Term::pair(b(true), b(true))},
                                                       {Term::pair(b(false), b(true)), Term::pair(b(false), b(true))},
                                                       {Term::pair(b(true), b(false)), Term::pair(b(true), b(false))},
                                                       {Term::pair(b(true), b(true)), Term::pair(b(true), b(true))}})},
                              embed(cd, parse_term("pairing [Bool, Bool] (inj [Bool] false) (inj [Bool] false)", l.env), l.env),
                              l.env);
  CHECK_FALSE(unembed(cd, stray, l.env).has_value());
}

TEST_CASE("map on a rewritten constructor composes the stored function") {
  testutil::Loaded l(testutil::sample("seq.gadt"));
  auto cd = *find_completion(l.env, "Seq");
  const Term &fg = l.term("fg");
  auto x = embed(cd, l.term("s"), l.env);
  auto y = map_completion(cd, {fg}, x, l.env);
  CHECK(y.args()[0] == fg);
  CHECK(y.args()[1] == x.args()[1]);
  CHECK(y.args()[2] == x.args()[2]);
  CHECK(y.type_args()[2] == fg.cod());
  auto inj = embed(cd, Term::con("inj", {B}, {b(true)}), l.env);
  CHECK(map_completion(cd, {neg_table()}, inj, l.env) == Term::con("inj_c", {B}, {b(false)}));
  CHECK_THROWS_AS(map_completion(cd, {neg_table()}, x, l.env), Error);
}

namespace {

void functor_laws(const CompletedDecl &cd, const std::vector<Term> &xs, const Type &a,
                  const Env &env) {
  auto fs = carrier(Type::arrow(a, a), env);
  auto id = identity_table(a, carrier(a, env));
  for (const auto &x : xs) {
    CHECK(map_completion(cd, {id}, x, env) == x);
    for (std::size_t i = 0; i < fs.size(); i += 3)
      for (std::size_t j = 0; j < fs.size(); j += 5) {
        auto lhs = map_completion(cd, {compose_tables(fs[j], fs[i])}, x, env);
        auto rhs = map_completion(cd, {fs[j]}, map_completion(cd, {fs[i]}, x, env), env);
        CHECK(lhs == rhs);
      }
  }
}

}  // namespace

TEST_CASE("functor laws on Seq_c") {
  testutil::Loaded l(testutil::sample("seq.gadt"));
  l.env.set_existential_types({Type::unit()});
  auto cd = *find_completion(l.env, "Seq");
  for (const auto &a : {B, BB}) {
    auto xs = enumerate_values(cd.completed, {a}, 2, l.env);
    CHECK(xs.size() > 4);
    functor_laws(cd, xs, a, l.env);
  }
}

TEST_CASE("functor laws on List") {
  testutil::Loaded l(testutil::sample("list.gadt"));
  auto cd = *find_completion(l.env, "List");
  functor_laws(cd, enumerate_values(cd.completed, {B}, 2, l.env), B, l.env);
  auto ys = map_completion(cd, {l.term("not")}, embed(cd, l.term("xs"), l.env), l.env);
  CHECK(*unembed(cd, ys, l.env) ==
        parse_term("cons [Bool] false (cons [Bool] true (nil [Bool]))", l.env));
}

TEST_CASE("functor laws on corpus completions") {
  for (const char *name : {"tag.gadt", "fun.gadt", "expr.gadt"}) {
    testutil::Loaded l(testutil::corpus(name));
    l.env.set_existential_types({Type::unit()});
    auto cd = *find_completion(l.env, l.file.decls()[0].name);
    auto xs = enumerate_values(cd.completed, {B}, 1, l.env);
    std::vector<Term> ok;
    auto id = identity_table(B, carrier(B, l.env));
    for (const auto &x : xs) {
      try {
        map_completion(cd, {id}, x, l.env);
        ok.push_back(x);
      } catch (const Error &) {
      }
    }
    CAPTURE(name);
    CHECK_FALSE(ok.empty());
    functor_laws(cd, ok, B, l.env);
  }
}
