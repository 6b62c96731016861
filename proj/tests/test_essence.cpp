#include "deltah/essence.hpp"
#include "deltah/parser.hpp"
#include "deltah/prelude.hpp"
#include "deltah/printer.hpp"
#include "deltah/typecheck.hpp"
#include "doctest.h"
#include "gen_util.hpp"

using namespace deltah;

namespace {

TypePtr even_type() {
  for (const auto& [n, t] : prelude().type_abbrevs) {
    if (n == "even") return t;
  }
  return nullptr;
}

TypePtr odd_type() {
  for (const auto& [n, t] : prelude().type_abbrevs) {
    if (n == "odd") return t;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("essence of types") {
  // (even -> even) /\ (odd -> odd) erases to nat -> nat.
  TypePtr w = wedge(arrow(even_type(), even_type()),
                    arrow(odd_type(), odd_type()));
  CHECK(pcf::type_eq(essence_type(w),
                     pcf::arrow(pcf::nat_type(), pcf::nat_type())));
  CHECK(pcf::type_eq(essence_type(nat_type()), pcf::nat_type()));
  CHECK(pcf::type_eq(essence_type(refine("x", nat_type(), iszero(var("x")))),
                     pcf::nat_type()));
}

TEST_CASE("essence of the decorated successor") {
  // \x:odd. (succ (x : odd => nat) : nat => even)  erases to  \x:nat. succ x
  ExprPtr m = abs("x", odd_type(),
                  cast(succ(cast(var("x"), odd_type(), nat_type())),
                       nat_type(), even_type()));
  pcf::ExprPtr want =
      pcf::abs("x", pcf::nat_type(), pcf::succ(pcf::var("x")));
  CHECK(pcf::alpha_eq(essence_expr(m), want));
}

TEST_CASE("essence of pairs and run-time forms") {
  ExprPtr m = pair(zero(), succ(zero()));
  CHECK(pcf::alpha_eq(essence_expr(m), pcf::zero()));
  CHECK(pcf::alpha_eq(essence_expr(zero()), pcf::zero()));

  // Active checks erase to their subject, not their running test.
  ExprPtr a = active(false_expr(), numeral(2), "x", nat_type(),
                     iszero(var("x")));
  CHECK(pcf::alpha_eq(essence_expr(a), pcf::numeral(2)));

  ExprPtr w = waiting(cast(zero(), nat_type(), nat_type()), "x", nat_type(),
                      iszero(var("x")));
  CHECK(pcf::alpha_eq(essence_expr(w), pcf::zero()));
}

TEST_CASE("embed then erase is the identity") {
  CHECK(pcf::alpha_eq(essence_expr(embed(pcf::zero())), pcf::zero()));
  pcf::ExprPtr id = pcf::abs("x", pcf::nat_type(), pcf::var("x"));
  CHECK(alpha_eq(embed(id), abs("x", nat_type(), var("x"))));
  CHECK(pcf::alpha_eq(essence_expr(embed(id)), id));
}

TEST_CASE("erasure is a retraction of embedding on generated plain terms") {
  // Strict-subset check via the round trip through both converters.
  testutil::RandomTerms gen(42);
  int plain = 0;
  for (int i = 0; i < 40000 && plain < 500; ++i) {
    ExprPtr t = gen.term();
    auto p = to_pcf(t);
    if (!p) continue;
    ++plain;
    CHECK(pcf::alpha_eq(essence_expr(t), *p));
    CHECK(pcf::alpha_eq(essence_expr(embed(*p)), *p));
    CHECK(alpha_eq(embed(*p), t));
  }
  CHECK(plain >= 500);
}

TEST_CASE("the essence of a value is a plain value") {
  testutil::RandomTerms gen(77);
  for (int i = 0; i < 200; ++i) {
    ExprPtr t = gen.term();
    if (is_value(t)) CHECK(pcf::is_value(essence_expr(t)));
  }
  ExprPtr d = delayed(abs("x", nat_type(), var("x")),
                      arrow(nat_type(), nat_type()), nat_type(), nat_type());
  CHECK(pcf::is_value(essence_expr(d)));
}

TEST_CASE("well-typed pairs agree on left and right essence") {
  ExprPtr p = parse_expr("<fun x:nat. succ x, fun y:nat. succ y>");
  REQUIRE(inferred(infer_compile(TypingContext{}, p)));
  const auto& pr = std::get<PairExpr>(p->node);
  CHECK(pcf::alpha_eq(essence_expr(pr.left), essence_expr(pr.right)));
  // So the left-biased erasure choice is immaterial for typed pairs.
  CHECK(pcf::alpha_eq(essence_expr(p), essence_expr(pr.right)));
}

TEST_CASE("well-formed wedges have matching component essences") {
  TypePtr w = wedge(arrow(even_type(), even_type()),
                    arrow(odd_type(), odd_type()));
  REQUIRE_FALSE(wf_type(w).has_value());
  const auto& wn = std::get<WedgeType>(w->node);
  CHECK(pcf::type_eq(essence_type(wn.left), essence_type(wn.right)));
}
