#include "deltah/essence.hpp"
#include "deltah/gen.hpp"
#include "deltah/parser.hpp"
#include "deltah/prelude.hpp"
#include "deltah/printer.hpp"
#include "deltah/typecheck.hpp"
#include "doctest.h"

using namespace deltah;

namespace {

ParseOptions with_prelude() {
  ParseOptions o;
  o.abbrevs = &prelude().type_abbrevs;
  return o;
}

ExprPtr src(const char* text) {
  return resolve(parse_expr(text, with_prelude()), prelude());
}

TypePtr ty(const char* text) { return parse_type(text, with_prelude()); }

TypeError err_of(const InferResult& r) {
  REQUIRE_FALSE(inferred(r));
  return infer_error(r);
}

}  // namespace

TEST_CASE("well-formed types") {
  CHECK_FALSE(wf_type(ty("(even -> even) /\\ (odd -> odd)")).has_value());
  CHECK_FALSE(wf_type(ty("{x:nat | iszero x}")).has_value());
  CHECK_FALSE(wf_type(ty("{b:bool | b}")).has_value());

  auto bad = wf_type(ty("(nat -> nat) /\\ (bool -> bool)"));
  REQUIRE(bad.has_value());
  CHECK(bad->kind == ErrorKind::EssenceMismatch);
  CHECK(bad->rule == "W-Wedge");

  auto nonbool = wf_type(refine("x", nat_type(), succ(var("x"))));
  REQUIRE(nonbool.has_value());
  CHECK(nonbool->rule == "W-Refine");
}

TEST_CASE("well-formed contexts") {
  CHECK_FALSE(wf_ctx(TypingContext{}).has_value());
  TypingContext dup({{"x", nat_type()}, {"x", bool_type()}});
  auto e = wf_ctx(dup);
  REQUIRE(e.has_value());
  CHECK(e->kind == ErrorKind::DuplicateBinding);
  CHECK(e->rule == "V-Push");
  TypingContext nested({{"x", ty("{y:nat | true}")}});
  CHECK_FALSE(wf_ctx(nested).has_value());
}

TEST_CASE("inference on the strong-pair examples") {
  InferResult r = infer_compile(TypingContext{}, src("<fun x:even. x, fun x:odd. x>"));
  REQUIRE(inferred(r));
  CHECK(alpha_eq(inferred_type(r), ty("(even -> even) /\\ (odd -> odd)")));
}

TEST_CASE("predecessor demands the nonzero refinement") {
  InferResult r = infer_compile(TypingContext{}, src("pred 0"));
  const TypeError& e = err_of(r);
  CHECK(e.kind == ErrorKind::PredNeedsNonzero);
  CHECK(e.rule == "T-Pred");

  // Guarded through a cast it is accepted.
  InferResult ok = infer_compile(TypingContext{}, src("pred (0 : nat => nonzero)"));
  REQUIRE(inferred(ok));
  CHECK(alpha_eq(inferred_type(ok), nat_type()));
}

TEST_CASE("pairs need matching essences") {
  const TypeError& e =
      err_of(infer_compile(TypingContext{}, src("<0, succ 0>")));
  CHECK(e.kind == ErrorKind::EssenceMismatch);
  CHECK(e.rule == "T-Pair");
}

TEST_CASE("casts") {
  InferResult r = infer_compile(TypingContext{},
                                src("(0 : nat => {x:nat | iszero x})"));
  REQUIRE(inferred(r));
  CHECK(alpha_eq(inferred_type(r), ty("{x:nat | iszero x}")));

  const TypeError& e =
      err_of(infer_compile(TypingContext{}, src("(0 : nat => bool)")));
  CHECK(e.kind == ErrorKind::EssenceMismatch);
  CHECK(e.rule == "T-Cast");

  // The declared source must be the subject's type.
  const TypeError& e2 =
      err_of(infer_compile(TypingContext{}, src("(true : nat => nat)")));
  CHECK(e2.rule == "T-True");
}

TEST_CASE("run-time forms are rejected in source programs") {
  ExprPtr w = waiting(zero(), "x", nat_type(), true_expr());
  const TypeError& e = err_of(infer_compile(TypingContext{}, w));
  CHECK(e.kind == ErrorKind::RuntimeFormInSource);
  CHECK(e.rule == "T-Waiting");
}

TEST_CASE("recursion annotations must be interface types") {
  const TypeError& e =
      err_of(infer_compile(TypingContext{}, src("mu f:nat. fun x:nat. x")));
  CHECK(e.kind == ErrorKind::NotInterface);
  CHECK(e.rule == "T-Fix");

  InferResult ok = infer_compile(
      TypingContext{},
      src("mu f:(even -> even) /\\ (odd -> odd). <fun x:even. x, fun x:odd. x>"));
  REQUIRE(inferred(ok));
  CHECK(alpha_eq(inferred_type(ok), ty("(even -> even) /\\ (odd -> odd)")));
}

TEST_CASE("run-time checking accepts exactly the satisfied refinements") {
  TypePtr zero_ref = ty("{x:nat | iszero x}");
  CHECK(check_runtime(TypingContext{}, zero(), zero_ref, 50).is_yes());
  TriVerdict no = check_runtime(TypingContext{}, succ(zero()), zero_ref, 50);
  CHECK(no.is_no());

  // Waiting checks carry their refinement type.
  ExprPtr w = waiting(cast(zero(), nat_type(), nat_type()), "x", nat_type(),
                      iszero(var("x")));
  CHECK(check_runtime(TypingContext{}, w, zero_ref, 50).is_yes());
}

TEST_CASE("run-time checking of delayed and active forms") {
  ExprPtr id2 = src("<fun x:even. (x : even => nat), fun x:odd. (x : odd => nat)>");
  TypePtr wt = ty("(even -> nat) /\\ (odd -> nat)");
  ExprPtr d = delayed(id2, wt, nat_type(), nat_type());
  CHECK(check_runtime(TypingContext{}, d, ty("nat -> nat"), 400).is_yes());

  // Active check mid-flight: test state must be reachable from the
  // instantiated predicate.
  ExprPtr a = active(iszero(zero()), zero(), "x", nat_type(),
                     iszero(var("x")));
  CHECK(check_runtime(TypingContext{}, a, ty("{x:nat | iszero x}"), 50)
            .is_yes());
  ExprPtr bad = active(false_expr(), zero(), "x", nat_type(),
                       iszero(var("x")));
  CHECK(check_runtime(TypingContext{}, bad, ty("{x:nat | iszero x}"), 50)
            .is_no());
}

TEST_CASE("unknown on out-of-fuel premises") {
  // evenp 0 needs a couple dozen steps; one unit of fuel cannot decide it.
  TypePtr ev = ty("even");
  TriVerdict v = check_runtime(TypingContext{}, zero(), ev, 1);
  CHECK(v.is_unknown());
  CHECK(check_runtime(TypingContext{}, zero(), ev, 2000).is_yes());
}

TEST_CASE("inferred types are well-formed, and runtime agrees with compile") {
  GenConfig cfg;
  cfg.seed = 2024;
  cfg.max_depth = 4;
  Generator gen(cfg);
  int checked = 0;
  for (int i = 0; i < 60; ++i) {
    Generated g = gen.gen_well_typed();
    InferResult r = infer_compile(TypingContext{}, g.term);
    REQUIRE_MESSAGE(inferred(r), print(g.term));
    CHECK(alpha_eq(inferred_type(r), g.type));
    CHECK_FALSE(wf_type(inferred_type(r)).has_value());
    TriVerdict v =
        check_runtime(TypingContext{}, g.term, inferred_type(r), 600);
    CHECK_FALSE(v.is_no());
    // Never Yes at a type with a different essence.
    if (pcf::type_eq(essence_type(g.type), pcf::nat_type())) {
      TriVerdict other =
          check_runtime(TypingContext{}, g.term, bool_type(), 600);
      CHECK_FALSE(other.is_yes());
    }
    ++checked;
  }
  CHECK(checked == 60);
}

TEST_CASE("typing is stable under substitution") {
  GenConfig cfg;
  cfg.seed = 99;
  cfg.max_depth = 3;
  Generator gen(cfg);
  for (int i = 0; i < 40; ++i) {
    TypePtr sigma = i % 2 == 0 ? nat_type() : ty("{x:nat | iszero x}");
    TypePtr tau = gen.gen_type();
    Generated open = gen.gen_under({{"u", sigma}}, tau);
    Generated closed = gen.gen_well_typed(sigma);
    ExprPtr substituted = subst(open.term, "u", closed.term);
    TriVerdict v = check_runtime(TypingContext{}, substituted, tau, 800);
    std::string msg = print(open.term) + " [u := " + print(closed.term) + "]";
    CHECK_MESSAGE(!v.is_no(), msg);
  }
}
