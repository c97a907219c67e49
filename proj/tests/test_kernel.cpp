#include <doctest.h>

#include "common.hpp"
#include "gadtparam/error.hpp"
#include "gadtparam/printer.hpp"

using namespace gadtparam;

namespace {
const Type B = Type::boolean();
const Type BB = Type::prod(B, B);
}  // namespace

TEST_CASE("carriers") {
  Env env;
  CHECK(carrier(B, env).size() == 2);
  CHECK(carrier(BB, env).size() == 4);
  CHECK(carrier(Type::unit(), env).size() == 1);
  CHECK(carrier(Type::arrow(B, B), env).size() == 4);
  CHECK(carrier_size(Type::arrow(BB, BB), env) == 256);
  auto c = carrier(BB, env);
  CHECK(std::is_sorted(c.begin(), c.end()));
  CHECK(to_string(c.front()) == "(false, false)");
}

TEST_CASE("carrier cap") {
  Env env;
  Type big = Type::prod(BB, Type::prod(BB, B));
  CHECK_THROWS_AS(carrier(big, env), CapError);
}

TEST_CASE("seq kind check") {
  testutil::Loaded l(testutil::sample("seq.gadt"));
  const auto &seq = l.decl("Seq");
  CHECK(seq.arity() == 1);
  CHECK_FALSE(seq.is_adt());
  REQUIRE(seq.ctors.size() == 2);
  CHECK(seq.ctors[0].variable_return);
  CHECK_FALSE(seq.ctors[1].variable_return);
  CHECK(seq.ctors[1].recursive == std::vector<bool>{true, true});
  CHECK(seq.ctors[1].existential.empty());
  CHECK(l.env.owner_of("pairing") == &seq);
}

TEST_CASE("list is an adt") {
  testutil::Loaded l(testutil::sample("list.gadt"));
  CHECK(l.decl("List").is_adt());
}

TEST_CASE("existential variables") {
  testutil::Loaded l(testutil::corpus("expr.gadt"));
  const auto *fst = l.decl("Expr").find("fst");
  REQUIRE(fst);
  CHECK(fst->existential == std::vector<std::string>{"β"});
}

TEST_CASE("kind errors") {
  Env env;
  auto bad_arity = parse_decls("data T : Set → Set where\n  c : ∀{α} → T α α\n");
  CHECK_THROWS_AS(kind_check(bad_arity[0], env), CheckError);
  auto unbound = parse_decls("data T : Set → Set where\n  c : ∀{α} → γ → T α\n");
  CHECK_THROWS_AS(kind_check(unbound[0], env), CheckError);
  auto unknown = parse_decls("data T : Set → Set where\n  c : ∀{α} → U α → T α\n");
  CHECK_THROWS_AS(kind_check(unknown[0], env), CheckError);
}

TEST_CASE("type_of") {
  testutil::Loaded l(testutil::sample("seq.gadt"));
  CHECK(to_string(type_of(l.term("s"), l.env)) == "Seq ((Bool × Bool) × Bool)");
  CHECK(to_string(type_of(l.term("f"), l.env)) == "Bool × Bool → Bool × Bool");
  auto ill = Term::con("pairing", {B, B}, {Term::con("inj", {B}, {Term::boolean(true)}),
                                           Term::con("inj", {BB}, {Term::pair(Term::boolean(true), Term::boolean(true))})});
  CHECK_THROWS_AS(type_of(ill, l.env), CheckError);
}

TEST_CASE("enumerate values") {
  testutil::Loaded l(testutil::sample("seq.gadt"));
  const auto &seq = l.decl("Seq");
  CHECK(enumerate_values(seq, {B}, 0, l.env).size() == 2);
  CHECK(enumerate_values(seq, {B}, 3, l.env).size() == 2);
  // inj at 4 values, pairing of two inj-Bools at 4
  CHECK(enumerate_values(seq, {BB}, 0, l.env).size() == 4);
  CHECK(enumerate_values(seq, {BB}, 2, l.env).size() == 8);
  auto deep = enumerate_values(seq, {Type::prod(BB, B)}, 2, l.env);
  CHECK(deep.size() == 8 + 8 + 8);
  CHECK(std::find(deep.begin(), deep.end(), l.term("t")) != deep.end());
  CHECK(term_depth(l.term("t"), l.env) == 2);
  CHECK(term_depth(l.term("s"), l.env) == 1);
  for (const auto &v : deep) CHECK(type_of(v, l.env) == Type::app("Seq", {Type::prod(BB, B)}));
}

TEST_CASE("enumerate list") {
  testutil::Loaded l(testutil::sample("list.gadt"));
  const auto &list = l.decl("List");
  CHECK(enumerate_values(list, {B}, 0, l.env).size() == 1);
  CHECK(enumerate_values(list, {B}, 2, l.env).size() == 7);
  CHECK_THROWS_AS(enumerate_values(list, {B}, 9, l.env), CapError);
}

TEST_CASE("existential enumeration uses the configured types") {
  testutil::Loaded l(testutil::corpus("expr.gadt"));
  const auto &expr = l.decl("Expr");
  auto n = enumerate_values(expr, {B}, 1, l.env).size();
  l.env.set_existential_types({Type::unit()});
  CHECK(enumerate_values(expr, {B}, 1, l.env).size() < n);
}

TEST_CASE("identity and composition tables") {
  Env env;
  auto id = identity_table(B, carrier(B, env));
  auto neg = Term::fun(B, B, {{Term::boolean(false), Term::boolean(true)},
                              {Term::boolean(true), Term::boolean(false)}});
  CHECK(compose_tables(neg, neg) == id);
  CHECK(compose_tables(id, neg) == neg);
  CHECK(*neg.apply(Term::boolean(true)) == Term::boolean(false));
}
