#include "deltah/pcf.hpp"
#include "doctest.h"

using namespace deltah::pcf;

TEST_CASE("root reductions") {
  // pred 0 steps to 0 here, unlike the contract calculus.
  auto s = pcf_step_labeled(pred(zero()));
  REQUIRE(s.has_value());
  CHECK(s->first == "PCF-Pred-Z");
  CHECK(alpha_eq(s->second, zero()));

  s = pcf_step_labeled(iszero(succ(zero())));
  REQUIRE(s.has_value());
  CHECK(s->first == "PCF-IsZero-F");
  CHECK(alpha_eq(s->second, boolean(false)));

  // mu f:nat->nat. \x:nat. x  unfolds to  \x:nat. x (f unused).
  ExprPtr id = abs("x", nat_type(), var("x"));
  ExprPtr mu = fix("f", arrow(nat_type(), nat_type()), id);
  s = pcf_step_labeled(mu);
  REQUIRE(s.has_value());
  CHECK(s->first == "PCF-Fix");
  CHECK(alpha_eq(s->second, id));
}

TEST_CASE("beta with the recursive unfolding substituted") {
  // mu f. \x. f x  unfolds to  \x. (mu f. \x. f x) x
  ExprPtr body = abs("x", nat_type(), app(var("f"), var("x")));
  ExprPtr mu = fix("f", arrow(nat_type(), nat_type()), body);
  auto s = pcf_step(mu);
  REQUIRE(s.has_value());
  CHECK(alpha_eq(*s, abs("x", nat_type(), app(mu, var("x")))));
}

TEST_CASE("context rule finds the call-by-value position") {
  auto s = pcf_step(succ(pred(succ(zero()))));
  REQUIRE(s.has_value());
  CHECK(alpha_eq(*s, succ(zero())));

  ExprPtr id = abs("x", nat_type(), var("x"));
  auto s2 = pcf_step(app(id, app(id, zero())));
  REQUIRE(s2.has_value());
  CHECK(alpha_eq(*s2, app(id, zero())));
}

TEST_CASE("values and stuck terms do not step") {
  CHECK_FALSE(pcf_step(zero()).has_value());
  CHECK_FALSE(pcf_step(abs("x", nat_type(), var("x"))).has_value());
  CHECK_FALSE(pcf_step(if_expr(zero(), zero(), zero())).has_value());
  CHECK_FALSE(pcf_step(succ(boolean(true))).has_value());
  CHECK_FALSE(pcf_step(var("x")).has_value());
}

TEST_CASE("pcf_eval outcomes") {
  auto r = pcf_eval(pred(succ(zero())), 10);
  CHECK(r.kind == EvalOutcome::Kind::Value);
  CHECK(alpha_eq(r.term, zero()));
  CHECK(r.steps == 1);

  // Omega via mu f. \x. f x applied to 0 diverges.
  ExprPtr omega = app(fix("f", arrow(nat_type(), nat_type()),
                          abs("x", nat_type(), app(var("f"), var("x")))),
                      zero());
  CHECK(pcf_eval(omega, 100).kind == EvalOutcome::Kind::FuelExhausted);

  CHECK(pcf_eval(if_expr(zero(), zero(), zero()), 10).kind ==
        EvalOutcome::Kind::Stuck);
}

TEST_CASE("numerals") {
  CHECK(numeral_value(numeral(7)) == 7);
  CHECK(is_value(numeral(7)));
  CHECK_FALSE(is_value(succ(abs("x", nat_type(), var("x")))));
}

TEST_CASE("substitution and alpha equivalence") {
  ExprPtr t = abs("y", nat_type(), var("x"));
  ExprPtr s = subst(t, "x", var("y"));
  CHECK(alpha_eq(s, abs("q", nat_type(), var("y"))));
  CHECK(alpha_eq(abs("a", nat_type(), var("a")),
                 abs("b", nat_type(), var("b"))));
  CHECK_FALSE(alpha_eq(abs("a", nat_type(), var("a")),
                       abs("a", bool_type(), var("a"))));
}
