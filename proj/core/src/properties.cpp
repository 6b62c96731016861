#include "deltah/properties.hpp"

#include <algorithm>
#include <future>
#include <unordered_set>
#include <variant>

#include "deltah/essence.hpp"
#include "deltah/eval.hpp"
#include "deltah/parser.hpp"
#include "deltah/prelude.hpp"
#include "deltah/printer.hpp"
#include "deltah/typecheck.hpp"
#include "json.hpp"

namespace deltah {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

constexpr int kStateCap = 256;        // per-case exploration bound
constexpr int kPreservationCap = 48;  // check_runtime per state is costly
// The inversion properties need the full value set; independent pair sides
// interleave, so their state spaces are products of the per-side runs.
constexpr int kInversionStateCap = 60000;

enum class Verdict { Pass, Fail, Unknown };

struct CaseResult {
  Verdict verdict = Verdict::Pass;
  long long states = 0;
  std::string detail;
};

// Reachable expression states, breadth-first, bounded.
struct Explored {
  std::vector<ExprPtr> exprs;
  bool blame = false;
  bool truncated = false;
};

Explored explore(const ExprPtr& m, int fuel, int max_states) {
  Explored out;
  std::unordered_set<Command, CommandAlphaHash, CommandAlphaEq> visited;
  std::vector<Command> frontier;
  Command start = Command::term(m);
  visited.insert(start);
  frontier.push_back(start);
  out.exprs.push_back(m);
  int depth = 0;
  while (!frontier.empty() && depth < fuel) {
    std::vector<Command> next;
    for (const Command& c : frontier) {
      if (c.is_blame()) {
        out.blame = true;
        continue;
      }
      for (auto& [label, succ] : step_all(c)) {
        if (static_cast<int>(visited.size()) >= max_states) {
          out.truncated = true;
          return out;
        }
        if (visited.insert(succ).second) {
          next.push_back(succ);
          if (!succ.is_blame()) {
            out.exprs.push_back(succ.expr());
          } else {
            out.blame = true;
          }
        }
      }
    }
    frontier = std::move(next);
    ++depth;
  }
  out.truncated = out.truncated || !frontier.empty();
  return out;
}

// ---------------------------------------------------------------------------
// Per-property case checks
// ---------------------------------------------------------------------------

CaseResult essence_sim_case(const ExprPtr& m, int fuel) {
  CaseResult r;
  Explored ex = explore(m, fuel, kStateCap);
  r.states = static_cast<long long>(ex.exprs.size());
  for (const ExprPtr& s : ex.exprs) {
    pcf::ExprPtr es = essence_expr(s);
    for (auto& [label, n] : step_p(s)) {
      auto ps = pcf::pcf_step(es);
      if (!ps || !pcf::alpha_eq(*ps, essence_expr(n))) {
        r.verdict = Verdict::Fail;
        r.detail = "p-step " + label.rule +
                   " is not mirrored by the plain evaluator at " + print(s);
        return r;
      }
    }
  }
  return r;
}

CaseResult essence_inv_case(const ExprPtr& m, int fuel) {
  CaseResult r;
  Explored ex = explore(m, fuel, kStateCap);
  r.states = static_cast<long long>(ex.exprs.size());
  for (const ExprPtr& s : ex.exprs) {
    pcf::ExprPtr es = essence_expr(s);
    for (auto& [label, c] : step_c(s)) {
      if (c.is_blame()) continue;
      if (!pcf::alpha_eq(es, essence_expr(c.expr()))) {
        r.verdict = Verdict::Fail;
        r.detail =
            "c-step " + label.rule + " changed the essence at " + print(s);
        return r;
      }
    }
  }
  return r;
}

CaseResult pair_sync_case(const ExprPtr& m, int fuel) {
  CaseResult r;
  Explored ex = explore(m, fuel, kStateCap);
  r.states = static_cast<long long>(ex.exprs.size());
  for (const ExprPtr& s : ex.exprs) {
    const auto* p = std::get_if<PairExpr>(&s->node);
    if (!p) continue;
    if (!pcf::alpha_eq(essence_expr(p->left), essence_expr(p->right))) {
      r.verdict = Verdict::Fail;
      r.detail = "pair components drifted apart at " + print(s);
      return r;
    }
    std::vector<PSuccessor> succs = step_p(s);
    if (succs.size() > 1) {
      r.verdict = Verdict::Fail;
      r.detail = "synchronized pair step is not a singleton at " + print(s);
      return r;
    }
    for (auto& [label, n] : succs) {
      const auto& np = std::get<PairExpr>(n->node);
      if (!pcf::alpha_eq(essence_expr(np.left), essence_expr(np.right))) {
        r.verdict = Verdict::Fail;
        r.detail = "synchronized step broke essence equality at " + print(s);
        return r;
      }
    }
  }
  return r;
}

CaseResult preservation_case(const ExprPtr& m, int fuel) {
  CaseResult r;
  InferResult ty = infer_compile(TypingContext{}, m);
  if (!inferred(ty)) return r;  // vacuous: property speaks of typed programs
  const TypePtr& t = inferred_type(ty);
  Explored ex = explore(m, fuel, kPreservationCap);
  r.states = static_cast<long long>(ex.exprs.size());
  bool saw_unknown = false;
  for (const ExprPtr& s : ex.exprs) {
    TriVerdict v = check_runtime(TypingContext{}, s, t, fuel);
    if (v.is_no()) {
      r.verdict = Verdict::Fail;
      r.detail = "reachable state rejected at the program type [" +
                 v.error->rule + "] " + v.error->message + " at " + print(s);
      return r;
    }
    if (v.is_unknown()) saw_unknown = true;
  }
  if (saw_unknown) r.verdict = Verdict::Unknown;
  return r;
}

CaseResult progress_case(const ExprPtr& m, int fuel) {
  CaseResult r;
  InferResult ty = infer_compile(TypingContext{}, m);
  if (!inferred(ty)) return r;
  Explored ex = explore(m, fuel, kStateCap);
  r.states = static_cast<long long>(ex.exprs.size());
  for (const ExprPtr& s : ex.exprs) {
    if (is_value(s)) continue;
    if (step_all(Command::term(s)).empty()) {
      r.verdict = Verdict::Fail;
      r.detail = "well-typed non-value is stuck: " + print(s);
      return r;
    }
  }
  return r;
}

// All evaluation paths of the instantiated predicate must reach true.
Verdict predicate_holds(const ExprPtr& instantiated, int fuel,
                        std::string& detail) {
  EvalResult er = eval(instantiated, Strategy::exhaustive(kStateCap), fuel);
  if (er.blame) {
    detail = "predicate run blamed: " + print(instantiated);
    return Verdict::Fail;
  }
  if (!er.stuck.empty()) {
    detail = "predicate run got stuck: " + print(er.stuck.front());
    return Verdict::Fail;
  }
  for (const ExprPtr& v : er.values) {
    if (!alpha_eq(v, true_expr())) {
      detail = "predicate evaluated to " + print(v) + " for " +
               print(instantiated);
      return Verdict::Fail;
    }
  }
  if (!er.fuel_exhausted.empty()) return Verdict::Unknown;
  if (er.values.empty()) return Verdict::Unknown;  // no path finished
  return Verdict::Pass;
}

CaseResult value_inversion_case(const ExprPtr& m, int fuel) {
  CaseResult r;
  InferResult ty = infer_compile(TypingContext{}, m);
  if (!inferred(ty)) return r;
  const auto* rt = std::get_if<RefineType>(&inferred_type(ty)->node);
  if (!rt) return r;  // vacuous: not a refinement-typed program
  EvalResult er = eval(m, Strategy::exhaustive(kInversionStateCap), fuel);
  r.states = er.states_explored;
  bool saw_unknown = !er.fuel_exhausted.empty();
  for (const ExprPtr& v : er.values) {
    Verdict pv =
        predicate_holds(subst(rt->predicate, rt->binder, v), fuel, r.detail);
    if (pv == Verdict::Fail) {
      r.verdict = Verdict::Fail;
      r.detail = "value " + print(v) + " escaped its refinement: " + r.detail;
      return r;
    }
    if (pv == Verdict::Unknown) saw_unknown = true;
  }
  if (saw_unknown) r.verdict = Verdict::Unknown;
  return r;
}

CaseResult intersection_inversion_case(const ExprPtr& m, int fuel) {
  CaseResult r;
  InferResult ty = infer_compile(TypingContext{}, m);
  if (!inferred(ty)) return r;
  const auto* w = std::get_if<WedgeType>(&inferred_type(ty)->node);
  if (!w) return r;
  const auto* r1 = std::get_if<RefineType>(&w->left->node);
  const auto* r2 = std::get_if<RefineType>(&w->right->node);
  if (!r1 || !r2) return r;
  EvalResult er = eval(m, Strategy::exhaustive(kInversionStateCap), fuel);
  r.states = er.states_explored;
  bool saw_unknown = !er.fuel_exhausted.empty();
  for (const ExprPtr& v : er.values) {
    const auto* p = std::get_if<PairExpr>(&v->node);
    if (!p) {
      r.verdict = Verdict::Fail;
      r.detail =
          "value of an intersection type is not a strong pair: " + print(v);
      return r;
    }
    for (int side = 0; side < 2; ++side) {
      const RefineType* rt = side == 0 ? r1 : r2;
      const ExprPtr& comp = side == 0 ? p->left : p->right;
      Verdict pv = predicate_holds(subst(rt->predicate, rt->binder, comp),
                                   fuel, r.detail);
      if (pv == Verdict::Fail) {
        r.verdict = Verdict::Fail;
        r.detail = "pair component " + print(comp) +
                   " violates its contract: " + r.detail;
        return r;
      }
      if (pv == Verdict::Unknown) saw_unknown = true;
    }
  }
  if (saw_unknown) r.verdict = Verdict::Unknown;
  return r;
}

// ---------------------------------------------------------------------------
// Independent enumeration of applicable plain-PCF rules (used to check that
// no two distinct rules ever apply).
// ---------------------------------------------------------------------------

using PcfStep = std::pair<std::string, pcf::ExprPtr>;

std::vector<PcfStep> pcf_applicable(const pcf::ExprPtr& m) {
  std::vector<PcfStep> out;
  auto lift = [&](const pcf::ExprPtr& sub, auto rebuild) {
    for (auto& [rule, s2] : pcf_applicable(sub)) {
      out.emplace_back(rule, rebuild(s2));
    }
  };
  std::visit(
      Overloaded{
          [&](const pcf::PredExpr& p) {
            if (std::holds_alternative<pcf::ZeroExpr>(p.arg->node)) {
              out.emplace_back("PCF-Pred-Z", pcf::zero());
            }
            if (const auto* s = std::get_if<pcf::SuccExpr>(&p.arg->node)) {
              if (pcf::is_numeral(s->arg)) {
                out.emplace_back("PCF-Pred", s->arg);
              }
            }
            lift(p.arg, [](pcf::ExprPtr x) { return pcf::pred(x); });
          },
          [&](const pcf::IsZeroExpr& z) {
            if (std::holds_alternative<pcf::ZeroExpr>(z.arg->node)) {
              out.emplace_back("PCF-IsZero-T", pcf::boolean(true));
            }
            if (const auto* s = std::get_if<pcf::SuccExpr>(&z.arg->node)) {
              if (pcf::is_numeral(s->arg)) {
                out.emplace_back("PCF-IsZero-F", pcf::boolean(false));
              }
            }
            lift(z.arg, [](pcf::ExprPtr x) { return pcf::iszero(x); });
          },
          [&](const pcf::SuccExpr& s) {
            lift(s.arg, [](pcf::ExprPtr x) { return pcf::succ(x); });
          },
          [&](const pcf::IfExpr& i) {
            if (const auto* b = std::get_if<pcf::BoolExpr>(&i.cond->node)) {
              out.emplace_back(b->value ? "PCF-If-T" : "PCF-If-F",
                               b->value ? i.then_branch : i.else_branch);
            }
            lift(i.cond, [&](pcf::ExprPtr x) {
              return pcf::if_expr(x, i.then_branch, i.else_branch);
            });
          },
          [&](const pcf::AppExpr& a) {
            if (const auto* f = std::get_if<pcf::AbsExpr>(&a.fn->node)) {
              if (pcf::is_value(a.arg)) {
                out.emplace_back("PCF-Beta",
                                 pcf::subst(f->body, f->param, a.arg));
              }
            }
            lift(a.fn, [&](pcf::ExprPtr x) { return pcf::app(x, a.arg); });
            if (pcf::is_value(a.fn)) {
              lift(a.arg, [&](pcf::ExprPtr x) { return pcf::app(a.fn, x); });
            }
          },
          [&](const pcf::FixExpr& f) {
            out.emplace_back(
                "PCF-Fix",
                pcf::subst(f.body, f.self,
                           std::make_shared<const pcf::Expr>(pcf::Expr{f})));
          },
          [](const auto&) {},
      },
      m->node);
  return out;
}

CaseResult pcf_determinism_case(const pcf::ExprPtr& p, int fuel) {
  CaseResult r;
  pcf::ExprPtr cur = p;
  int steps = std::min(fuel, 200);
  for (int i = 0; i < steps; ++i) {
    if (pcf::is_value(cur)) break;
    std::vector<PcfStep> apps = pcf_applicable(cur);
    auto step = pcf::pcf_step(cur);
    ++r.states;
    if (apps.size() > 1) {
      r.verdict = Verdict::Fail;
      r.detail =
          "two rules apply (" + apps[0].first + ", " + apps[1].first + ")";
      return r;
    }
    if (apps.empty() == step.has_value() ||
        (step && !pcf::alpha_eq(apps[0].second, *step))) {
      r.verdict = Verdict::Fail;
      r.detail = "stepper disagrees with the rule table";
      return r;
    }
    if (!step) break;
    cur = *step;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Corpus and dispatch
// ---------------------------------------------------------------------------

Generated with_inferred_type(ExprPtr term) {
  InferResult ty = infer_compile(TypingContext{}, term);
  return Generated{std::move(term),
                   inferred(ty) ? inferred_type(ty) : nullptr};
}

ExprPtr parse_with_prelude(const char* src) {
  const Prelude& p = prelude();
  ParseOptions opts;
  opts.abbrevs = &p.type_abbrevs;
  return resolve(parse_expr(src, opts), p);
}

}  // namespace

ExprPtr succ_pair_term() {
  return parse_with_prelude(
      "<fun x:odd. (succ (x : odd => nat) : nat => even),"
      " fun x:even. (succ (x : even => nat) : nat => odd)>");
}

ExprPtr identity_pair_term() {
  return parse_with_prelude("<fun x:even. x, fun x:odd. x>");
}

ExprPtr delayed_cast_program() {
  return parse_with_prelude(
      "(fun f:nat->nat. add (f 0) (f 1))"
      " (<fun x:even. (x : even => nat), fun x:odd. (x : odd => nat)>"
      "  : (even -> nat) /\\ (odd -> nat) => nat -> nat)");
}

ExprPtr failing_check_program() {
  return parse_with_prelude("add (0 : nat => {x:nat | gt x 0}) 1");
}

std::vector<Generated> worked_examples() {
  return {
      with_inferred_type(succ_pair_term()),
      with_inferred_type(identity_pair_term()),
      with_inferred_type(delayed_cast_program()),
      with_inferred_type(failing_check_program()),
  };
}

const std::vector<std::string>& property_names() {
  static const std::vector<std::string> names = {
      "pcf-determinism", "essence-sim",     "essence-inv",
      "pair-sync",       "preservation",    "progress",
      "value-inversion", "intersection-inversion",
  };
  return names;
}

bool is_property_name(const std::string& name) {
  const auto& names = property_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

Corpus build_corpus(const std::string& property, const GenConfig& cfg,
                    int cases) {
  Corpus corpus;
  corpus.deltah = worked_examples();
  Generator gen(cfg);
  if (property == "pcf-determinism") {
    for (const Generated& g : corpus.deltah) {
      corpus.pcf.push_back(essence_expr(g.term));
    }
    for (int i = 0; i < cases; ++i) corpus.pcf.push_back(gen.gen_pcf_term());
    return corpus;
  }
  bool inversion = property == "value-inversion" ||
                   property == "intersection-inversion";
  // Inversion cases must reach values and be exhaustively explorable, so
  // their computation skeletons stay shallow; the checking machinery still
  // gets the full decoration treatment.
  GenConfig shaped = cfg;
  if (inversion) shaped.max_depth = std::min(cfg.max_depth, 3);
  Generator inv_gen(shaped);
  Generator& use = inversion ? inv_gen : gen;
  for (int i = 0; i < cases; ++i) {
    TypePtr goal;
    if (property == "value-inversion") {
      goal = use.gen_refinement_type();
    } else if (property == "intersection-inversion") {
      goal = use.gen_wedge_of_refinements();
    } else if (property == "pair-sync") {
      goal = use.gen_wedge_type();
    }
    Generated g = goal ? use.gen_well_typed(goal) : use.gen_well_typed();
    for (int retry = 0; retry < 10 && expr_size(g.term) > 4000; ++retry) {
      g = goal ? use.gen_well_typed(goal) : use.gen_well_typed();
    }
    corpus.deltah.push_back(std::move(g));
  }
  return corpus;
}

PropertyReport check_property(const std::string& property,
                              const Corpus& corpus, int fuel, int jobs) {
  PropertyReport report;
  report.property = property;

  std::function<CaseResult(const ExprPtr&)> run_expr;
  if (property == "essence-sim") {
    run_expr = [fuel](const ExprPtr& m) { return essence_sim_case(m, fuel); };
  } else if (property == "essence-inv") {
    run_expr = [fuel](const ExprPtr& m) { return essence_inv_case(m, fuel); };
  } else if (property == "pair-sync") {
    run_expr = [fuel](const ExprPtr& m) { return pair_sync_case(m, fuel); };
  } else if (property == "preservation") {
    run_expr = [fuel](const ExprPtr& m) { return preservation_case(m, fuel); };
  } else if (property == "progress") {
    run_expr = [fuel](const ExprPtr& m) { return progress_case(m, fuel); };
  } else if (property == "value-inversion") {
    run_expr = [fuel](const ExprPtr& m) {
      return value_inversion_case(m, fuel);
    };
  } else if (property == "intersection-inversion") {
    run_expr = [fuel](const ExprPtr& m) {
      return intersection_inversion_case(m, fuel);
    };
  } else if (property == "pcf-determinism") {
    run_expr = [fuel](const ExprPtr& m) {
      auto p = to_pcf(m);
      if (!p) return CaseResult{};  // vacuous on non-plain terms
      return pcf_determinism_case(*p, fuel);
    };
  } else {
    throw std::invalid_argument("unknown property: " + property);
  }

  std::vector<ExprPtr> inputs;
  if (property == "pcf-determinism") {
    for (const pcf::ExprPtr& p : corpus.pcf) inputs.push_back(embed(p));
  } else {
    for (const Generated& g : corpus.deltah) inputs.push_back(g.term);
  }

  std::vector<CaseResult> results(inputs.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) results[i] = run_expr(inputs[i]);
  };
  if (jobs > 1 && inputs.size() > 1) {
    std::size_t chunk = (inputs.size() + static_cast<std::size_t>(jobs) - 1) /
                        static_cast<std::size_t>(jobs);
    std::vector<std::future<void>> futures;
    for (std::size_t b = 0; b < inputs.size(); b += chunk) {
      futures.push_back(std::async(std::launch::async, work, b,
                                   std::min(b + chunk, inputs.size())));
    }
    for (auto& f : futures) f.get();
  } else {
    work(0, inputs.size());
  }

  report.cases = static_cast<int>(inputs.size());
  for (const CaseResult& cr : results) {
    report.states_explored += cr.states;
    switch (cr.verdict) {
      case Verdict::Pass: ++report.passed; break;
      case Verdict::Unknown: ++report.unknown; break;
      case Verdict::Fail: ++report.failed; break;
    }
  }

  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].verdict != Verdict::Fail) continue;
    auto fails = [&](const ExprPtr& e) {
      return run_expr(e).verdict == Verdict::Fail;
    };
    CounterExample ce;
    ce.term = shrink(inputs[i], fails);
    InferResult ty = infer_compile(TypingContext{}, ce.term);
    ce.type = inferred(ty) ? inferred_type(ty) : nullptr;
    for (auto& [label, cmd] : trace(ce.term, Strategy::first(), 50)) {
      ce.trace.push_back(TraceStep{label.rule, print(cmd)});
    }
    report.counterexample = std::move(ce);
    break;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Shrinking
// ---------------------------------------------------------------------------

namespace {

void immediate_children(const ExprPtr& e, std::vector<ExprPtr>& out) {
  std::visit(
      Overloaded{
          [&](const SuccExpr& s) { out.push_back(s.arg); },
          [&](const PredExpr& s) { out.push_back(s.arg); },
          [&](const IsZeroExpr& s) { out.push_back(s.arg); },
          [&](const IfExpr& i) {
            out.push_back(i.cond);
            out.push_back(i.then_branch);
            out.push_back(i.else_branch);
          },
          [&](const AppExpr& a) {
            out.push_back(a.fn);
            out.push_back(a.arg);
          },
          [&](const AbsExpr& a) { out.push_back(a.body); },
          [&](const FixExpr& f) { out.push_back(f.body); },
          [&](const PairExpr& p) {
            out.push_back(p.left);
            out.push_back(p.right);
          },
          [&](const ProjExpr& p) { out.push_back(p.subject); },
          [&](const CastExpr& c) { out.push_back(c.subject); },
          [&](const DelayedExpr& d) { out.push_back(d.subject); },
          [&](const WaitingExpr& w) { out.push_back(w.subject); },
          [&](const ActiveExpr& a) {
            out.push_back(a.test);
            out.push_back(a.subject);
          },
          [](const auto&) {},
      },
      e->node);
}

ExprPtr rebuild_with(const ExprPtr& e, std::size_t slot, const ExprPtr& r) {
  return std::visit(
      Overloaded{
          [&](const SuccExpr&) { return succ(r); },
          [&](const PredExpr&) { return pred(r); },
          [&](const IsZeroExpr&) { return iszero(r); },
          [&](const IfExpr& i) {
            if (slot == 0) return if_expr(r, i.then_branch, i.else_branch);
            if (slot == 1) return if_expr(i.cond, r, i.else_branch);
            return if_expr(i.cond, i.then_branch, r);
          },
          [&](const AppExpr& a) {
            return slot == 0 ? app(r, a.arg) : app(a.fn, r);
          },
          [&](const AbsExpr& a) { return abs(a.param, a.annotation, r); },
          [&](const FixExpr& f) { return fix(f.self, f.annotation, r); },
          [&](const PairExpr& p) {
            return slot == 0 ? pair(r, p.right) : pair(p.left, r);
          },
          [&](const ProjExpr& p) { return proj(p.side, r); },
          [&](const CastExpr& c) { return cast(r, c.source, c.target); },
          [&](const DelayedExpr& d) {
            return delayed(r, d.source, d.target_dom, d.target_cod);
          },
          [&](const WaitingExpr& w) {
            return waiting(r, w.binder, w.underlying, w.predicate);
          },
          [&](const ActiveExpr& a) {
            if (slot == 0) {
              return active(r, a.subject, a.binder, a.underlying, a.predicate);
            }
            return active(a.test, r, a.binder, a.underlying, a.predicate);
          },
          [&](const auto&) { return e; },
      },
      e->node);
}

// All single-position rewrites, used as shrink candidates.
void rewrites(const ExprPtr& e, std::vector<ExprPtr>& out) {
  std::vector<ExprPtr> children;
  immediate_children(e, children);
  for (const ExprPtr& c : children) out.push_back(c);
  if (auto n = numeral_value(e); n && *n > 0) {
    out.push_back(numeral(*n / 2));
    out.push_back(numeral(*n - 1));
  }
  if (!children.empty()) {
    for (const ExprPtr& leafy : {zero(), true_expr(), false_expr()}) {
      out.push_back(leafy);
    }
  }
  for (std::size_t slot = 0; slot < children.size(); ++slot) {
    std::vector<ExprPtr> inner;
    rewrites(children[slot], inner);
    for (const ExprPtr& r : inner) {
      try {
        out.push_back(rebuild_with(e, slot, r));
      } catch (const std::invalid_argument&) {
        // rebuilding violated a construction invariant; skip the candidate
      }
    }
  }
}

}  // namespace

ExprPtr shrink(const ExprPtr& counterexample,
               const std::function<bool(const ExprPtr&)>& still_fails) {
  ExprPtr cur = counterexample;
  bool progress = true;
  while (progress) {
    progress = false;
    std::vector<ExprPtr> candidates;
    rewrites(cur, candidates);
    for (const ExprPtr& cand : candidates) {
      if (expr_size(cand) >= expr_size(cur)) continue;
      bool failing = false;
      try {
        failing = still_fails(cand);
      } catch (...) {
        failing = false;
      }
      if (failing) {
        cur = cand;
        progress = true;
        break;
      }
    }
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Report serialization
// ---------------------------------------------------------------------------

std::string PropertyReport::to_json() const {
  nlohmann::json j;
  j["property"] = property;
  j["cases"] = cases;
  j["passed"] = passed;
  j["unknown"] = unknown;
  j["failed"] = failed;
  j["states_explored"] = states_explored;
  if (counterexample) {
    nlohmann::json c;
    c["term"] = print(counterexample->term);
    if (counterexample->type) {
      c["type"] = print(counterexample->type);
    } else {
      c["type"] = nullptr;
    }
    nlohmann::json steps = nlohmann::json::array();
    for (const TraceStep& s : counterexample->trace) {
      steps.push_back({{"rule", s.rule}, {"command", s.command}});
    }
    c["trace"] = std::move(steps);
    j["counterexample"] = std::move(c);
  }
  return j.dump(2);
}

}  // namespace deltah
