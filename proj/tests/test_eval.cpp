#include <algorithm>

#include "deltah/essence.hpp"
#include "deltah/eval.hpp"
#include "deltah/parser.hpp"
#include "deltah/prelude.hpp"
#include "deltah/printer.hpp"
#include "deltah/properties.hpp"
#include "deltah/typecheck.hpp"
#include "doctest.h"
#include "gen_util.hpp"

using namespace deltah;

namespace {

ExprPtr src(const char* text) {
  ParseOptions o;
  o.abbrevs = &prelude().type_abbrevs;
  return resolve(parse_expr(text, o), prelude());
}

bool has_rule(const std::vector<CSuccessor>& succs, const std::string& rule) {
  return std::any_of(succs.begin(), succs.end(), [&](const CSuccessor& s) {
    return s.first.rule.rfind(rule, 0) == 0;
  });
}

std::vector<std::string> rc_labels(const std::vector<CSuccessor>& steps) {
  std::vector<std::string> out;
  for (const auto& [label, cmd] : steps) {
    if (label.rule.rfind("RC-", 0) == 0) out.push_back(label.rule);
  }
  return out;
}

bool contains_subsequence(const std::vector<std::string>& haystack,
                          const std::vector<std::string>& needle) {
  std::size_t j = 0;
  for (const auto& s : haystack) {
    if (j < needle.size() && s == needle[j]) ++j;
  }
  return j == needle.size();
}

}  // namespace

TEST_CASE("essential reduction has no rule for pred 0") {
  CHECK(reduce_p(pred(succ(zero()))).size() == 1);
  CHECK(reduce_p(pred(succ(zero())))[0].first.rule == "RP-Pred");
  CHECK(reduce_p(pred(zero())).empty());
  CHECK(step_p(pred(zero())).empty());
  CHECK(step_all(Command::term(pred(zero()))).empty());  // stuck
}

TEST_CASE("fix unfolds as an essential reduction") {
  ExprPtr lam = abs("x", nat_type(), var("x"));
  ExprPtr mu = fix("f", arrow(nat_type(), nat_type()), lam);
  auto succs = reduce_p(mu);
  REQUIRE(succs.size() == 1);
  CHECK(succs[0].first.rule == "RP-Fix");
  CHECK(alpha_eq(succs[0].second, lam));

  // Interface-typed recursion over a strong pair of lambdas.
  ExprPtr body = pair(src("fun x:even. x"), src("fun x:odd. x"));
  ExprPtr muw =
      fix("f",
          parse_type("(even -> even) /\\ (odd -> odd)",
                     ParseOptions{ParseOptions::Mode::Source,
                                  &prelude().type_abbrevs}),
          body);
  auto ws = reduce_p(muw);
  REQUIRE(ws.size() == 1);
  CHECK(ws[0].first.rule == "RP-Fix");
  CHECK(alpha_eq(ws[0].second, body));  // f does not occur in the body
}

TEST_CASE("the waiting subject position is an evaluation frame") {
  // <| (0 : nat => nat) ? R |>  c-steps to  <| 0 ? R |>  via the frame.
  ExprPtr w = waiting(cast(zero(), nat_type(), nat_type()), "x", nat_type(),
                      iszero(var("x")));
  auto succs = step_c(w);
  REQUIRE(succs.size() == 1);
  CHECK(succs[0].first.rule == "RC-Nat");
  CHECK(alpha_eq(succs[0].second.expr(),
                 waiting(zero(), "x", nat_type(), iszero(var("x")))));
}

TEST_CASE("synchronized pair stepping") {
  // <(\x:even. x) 2, (\x:odd. x) 2>  p-steps in lockstep.
  ExprPtr lame = src("fun x:even. x");
  ExprPtr lamo = src("fun x:odd. x");
  ExprPtr two = numeral(2);
  ExprPtr p = pair(app(lame, two), app(lamo, two));
  auto succs = step_p(p);
  REQUIRE(succs.size() == 1);
  CHECK(succs[0].first.rule == "EP-PairS");
  CHECK(alpha_eq(succs[0].second, pair(two, two)));

  // A pair whose left side is already a value cannot p-step.
  ExprPtr idnat = abs("x", nat_type(), var("x"));
  CHECK(step_p(pair(zero(), app(idnat, zero()))).empty());
}

TEST_CASE("cast dispatch on checking reductions") {
  ExprPtr v = zero();
  TypePtr r1 = refine("x", nat_type(), iszero(var("x")));
  TypePtr r2 = refine("x", nat_type(), true_expr());

  // Wedge target splits into a strong pair of casts.
  auto wi = reduce_c(cast(v, nat_type(), wedge(r1, r2)));
  REQUIRE(wi.size() == 1);
  CHECK(wi[0].first.rule == "RC-WedgeI");
  CHECK(alpha_eq(wi[0].second.expr(),
                 pair(cast(v, nat_type(), r1), cast(v, nat_type(), r2))));

  // Refinement source is stripped first.
  auto fg = reduce_c(cast(v, r1, nat_type()));
  REQUIRE(fg.size() == 1);
  CHECK(fg[0].first.rule == "RC-Forget");

  // Base identity casts.
  CHECK(reduce_c(cast(v, nat_type(), nat_type()))[0].first.rule == "RC-Nat");
  CHECK(reduce_c(cast(true_expr(), bool_type(), bool_type()))[0].first.rule ==
        "RC-Bool");

  // Wedge source to a base type projects the left component.
  ExprPtr pv = pair(zero(), zero());
  auto wn = reduce_c(cast(pv, wedge(nat_type(), nat_type()), nat_type()));
  REQUIRE(wn.size() == 1);
  CHECK(wn[0].first.rule == "RC-WedgeN");
  CHECK(alpha_eq(wn[0].second.expr(),
                 cast(proj(1, pv), nat_type(), nat_type())));

  // Arrow target delays.
  ExprPtr lam = abs("x", nat_type(), var("x"));
  auto dl = reduce_c(cast(lam, arrow(nat_type(), nat_type()),
                          arrow(nat_type(), nat_type())));
  REQUIRE(dl.size() == 1);
  CHECK(dl[0].first.rule == "RC-Delay");

  // Refinement target starts waiting on the underlying cast.
  auto wt = reduce_c(cast(v, nat_type(), r1));
  REQUIRE(wt.size() == 1);
  CHECK(wt[0].first.rule == "RC-Waiting");

  // No rule between mismatched bases: stuck at the relation.
  CHECK(reduce_c(cast(v, nat_type(), bool_type())).empty());
}

TEST_CASE("delayed application: arrow source vs wedge source") {
  ExprPtr lam = abs("x", nat_type(), var("x"));
  TypePtr nn = arrow(nat_type(), nat_type());
  ExprPtr d = delayed(lam, nn, nat_type(), nat_type());
  auto ar = reduce_c(app(d, zero()));
  REQUIRE(ar.size() == 1);
  CHECK(ar[0].first.rule == "RC-Arrow");
  CHECK(alpha_eq(ar[0].second.expr(),
                 cast(app(lam, cast(zero(), nat_type(), nat_type())),
                      nat_type(), nat_type())));

  // Wedge source: the two-element nondeterministic set.
  ExprPtr pv = pair(lam, lam);
  ExprPtr dw = delayed(pv, wedge(nn, nn), nat_type(), nat_type());
  auto wr = reduce_c(app(dw, zero()));
  REQUIRE(wr.size() == 2);
  CHECK(wr[0].first.rule == "RC-WedgeL");
  CHECK(wr[1].first.rule == "RC-WedgeR");
  CHECK(alpha_eq(wr[0].second.expr(),
                 app(cast(proj(1, pv), nn, nn), zero())));
  CHECK(alpha_eq(wr[1].second.expr(),
                 app(cast(proj(2, pv), nn, nn), zero())));
}

TEST_CASE("waiting activates, active succeeds or fails") {
  ExprPtr w = waiting(zero(), "x", nat_type(), iszero(var("x")));
  auto act = reduce_c(w);
  REQUIRE(act.size() == 1);
  CHECK(act[0].first.rule == "RC-Activate");
  CHECK(alpha_eq(act[0].second.expr(),
                 active(iszero(zero()), zero(), "x", nat_type(),
                        iszero(var("x")))));

  ExprPtr ok = active(true_expr(), zero(), "x", nat_type(), iszero(var("x")));
  CHECK(reduce_c(ok)[0].first.rule == "RC-Succeed");
  CHECK(alpha_eq(reduce_c(ok)[0].second.expr(), zero()));

  ExprPtr fail = active(false_expr(), zero(), "x", nat_type(),
                        iszero(succ(var("x"))));
  auto fl = reduce_c(fail);
  REQUIRE(fl.size() == 1);
  CHECK(fl[0].first.rule == "RC-Fail");
  CHECK(fl[0].second.is_blame());
}

TEST_CASE("blame collapses through frames in one step") {
  ExprPtr fail = active(false_expr(), zero(), "x", nat_type(),
                        iszero(var("x")));
  auto succs = step_c(succ(fail));
  REQUIRE(succs.size() == 1);
  CHECK(succs[0].second.is_blame());
  CHECK(succs[0].first.rule == "RC-Fail");  // context lift keeps the axiom
}

TEST_CASE("pair sides check independently") {
  ExprPtr c = cast(zero(), nat_type(), nat_type());
  ExprPtr other = succ(zero());
  auto succs = step_c(pair(c, other));
  CHECK(has_rule(succs, "EC-PairL"));
  bool found = false;
  for (auto& [label, cmd] : succs) {
    if (label.rule.rfind("EC-PairL", 0) == 0) {
      CHECK(alpha_eq(cmd.expr(), pair(zero(), other)));
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("evaluation inside an active check counts as checking") {
  ExprPtr a = active(iszero(zero()), zero(), "x", nat_type(),
                     iszero(var("x")));
  auto succs = step_c(a);
  REQUIRE(succs.size() == 1);
  CHECK(succs[0].first.rule.rfind("EC-ActiveP", 0) == 0);
  CHECK_FALSE(succs[0].first.essential);
  // And step_p does not touch it.
  CHECK(step_p(a).empty());
}

TEST_CASE("step_all unions the relations; blame and values are terminal") {
  CHECK(step_all(Command::blame()).empty());
  CHECK(step_all(Command::term(numeral(3))).empty());

  auto p_only = step_all(Command::term(pred(succ(zero()))));
  REQUIRE(p_only.size() == 1);
  CHECK(p_only[0].first.essential);

  auto c_only = step_all(Command::term(cast(zero(), nat_type(), nat_type())));
  REQUIRE(c_only.size() == 1);
  CHECK(c_only[0].first.rule == "RC-Nat");
  CHECK_FALSE(c_only[0].first.essential);
}

TEST_CASE("values are irreducible") {
  testutil::RandomTerms gen(5);
  for (int i = 0; i < 150; ++i) {
    ExprPtr t = gen.term();
    if (is_value(t)) {
      CHECK(step_all(Command::term(t)).empty());
    }
  }
}

TEST_CASE("the failing first-order check blames under every strategy") {
  ExprPtr b = failing_check_program();
  for (Strategy s : {Strategy::first(), Strategy::exhaustive(),
                     Strategy::random(7)}) {
    EvalResult r = eval(b, s, kDefaultFuel);
    CHECK(r.blame);
    CHECK(r.values.empty());
  }
  auto steps = trace(b, Strategy::first(), kDefaultFuel);
  REQUIRE_FALSE(steps.empty());
  CHECK(steps.back().second.is_blame());
  CHECK(contains_subsequence(rc_labels(steps),
                             {"RC-Waiting", "RC-Activate", "RC-Fail"}));
}

TEST_CASE("the delayed intersection cast program converges to 1") {
  ExprPtr m = delayed_cast_program();
  EvalResult r = eval(m, Strategy::exhaustive(), kDefaultFuel);
  REQUIRE(r.values.size() == 1);
  CHECK(alpha_eq(r.values[0], numeral(1)));
  CHECK(r.stuck.empty());
  CHECK(r.fuel_exhausted.empty());
  // The mismatched wedge choices blame; the matched ones converge.  Both
  // outcomes are reachable, exactly as for the succ' cast below.
  CHECK(r.blame);
}

TEST_CASE("casting succ' out of its intersection: one side works, one blames") {
  ExprPtr program = app(
      cast(succ_pair_term(),
           parse_type("(odd -> even) /\\ (even -> odd)",
                      ParseOptions{ParseOptions::Mode::Source,
                                   &prelude().type_abbrevs}),
           arrow(nat_type(), nat_type())),
      numeral(3));
  EvalResult r = eval(program, Strategy::exhaustive(), kDefaultFuel);
  bool has4 = false;
  for (const auto& v : r.values) has4 = has4 || alpha_eq(v, numeral(4));
  CHECK(has4);
  CHECK(r.blame);
}

TEST_CASE("simple traces") {
  auto t = trace(cast(zero(), nat_type(), nat_type()), Strategy::first(), 5);
  REQUIRE(t.size() == 1);
  CHECK(t[0].first.rule == "RC-Nat");
  CHECK(alpha_eq(t[0].second.expr(), zero()));

  // Activate, run the one-step test, succeed.
  ExprPtr w = waiting(zero(), "x", nat_type(), iszero(var("x")));
  auto t2 = trace(w, Strategy::first(), 10);
  REQUIRE(t2.size() == 3);
  CHECK(t2[0].first.rule == "RC-Activate");
  CHECK(t2[1].first.rule.rfind("EC-ActiveP", 0) == 0);
  CHECK(t2[2].first.rule == "RC-Succeed");
  CHECK(alpha_eq(t2.back().second.expr(), zero()));
}

TEST_CASE("eval of a value is immediate") {
  EvalResult r = eval(zero(), Strategy::first(), 10);
  REQUIRE(r.values.size() == 1);
  CHECK(alpha_eq(r.values[0], zero()));
  CHECK_FALSE(r.blame);
}

TEST_CASE("random strategy is reproducible per seed") {
  ExprPtr m = delayed_cast_program();
  EvalResult a = eval(m, Strategy::random(11), kDefaultFuel);
  EvalResult b = eval(m, Strategy::random(11), kDefaultFuel);
  CHECK(a.blame == b.blame);
  REQUIRE(a.values.size() == b.values.size());
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    CHECK(alpha_eq(a.values[i], b.values[i]));
  }
}

TEST_CASE("essence simulation and invisibility along the worked example") {
  ExprPtr m = delayed_cast_program();
  REQUIRE(inferred(infer_compile(TypingContext{}, m)));
  // Walk one path, checking both directions step by step.
  Command cur = Command::term(m);
  for (int i = 0; i < 200 && !cur.is_blame() && !is_value(cur.expr()); ++i) {
    pcf::ExprPtr before = essence_expr(cur.expr());
    auto succs = step_all(cur);
    if (succs.empty()) break;
    for (auto& [label, next] : succs) {
      if (next.is_blame()) continue;
      pcf::ExprPtr after = essence_expr(next.expr());
      if (label.essential) {
        auto ps = pcf::pcf_step(before);
        REQUIRE(ps.has_value());
        CHECK(pcf::alpha_eq(*ps, after));
      } else {
        CHECK(pcf::alpha_eq(before, after));
      }
    }
    cur = succs[0].second;
  }
}
