#include "deltah/eval.hpp"

#include <algorithm>
#include <functional>
#include <future>
#include <random>
#include <stdexcept>
#include <unordered_set>
#include <variant>

namespace deltah {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

StepLabel p_label(const char* rule) { return StepLabel{rule, true}; }
StepLabel c_label(std::string rule) { return StepLabel{std::move(rule), false}; }

}  // namespace

// ---------------------------------------------------------------------------
// Essential reduction and evaluation
// ---------------------------------------------------------------------------

std::vector<PSuccessor> reduce_p(const ExprPtr& m) {
  std::vector<PSuccessor> out;
  std::visit(
      Overloaded{
          [&](const PredExpr& p) {
            // RP-Pred; there is deliberately no rule for pred 0.
            if (const auto* s = std::get_if<SuccExpr>(&p.arg->node)) {
              if (is_numeral(s->arg)) out.emplace_back(p_label("RP-Pred"), s->arg);
            }
          },
          [&](const IsZeroExpr& z) {
            if (std::holds_alternative<ZeroExpr>(z.arg->node)) {
              out.emplace_back(p_label("RP-IsZero-T"), true_expr());
            } else if (const auto* s = std::get_if<SuccExpr>(&z.arg->node)) {
              if (is_numeral(s->arg)) {
                out.emplace_back(p_label("RP-IsZero-F"), false_expr());
              }
            }
          },
          [&](const IfExpr& i) {
            if (const auto* b = std::get_if<BoolExpr>(&i.cond->node)) {
              if (b->value) {
                out.emplace_back(p_label("RP-If-T"), i.then_branch);
              } else {
                out.emplace_back(p_label("RP-If-F"), i.else_branch);
              }
            }
          },
          [&](const AppExpr& a) {
            if (const auto* f = std::get_if<AbsExpr>(&a.fn->node)) {
              if (is_value(a.arg)) {
                out.emplace_back(p_label("RP-Beta"),
                                 subst(f->body, f->param, a.arg));
              }
            }
          },
          [&](const FixExpr& f) {
            out.emplace_back(p_label("RP-Fix"), subst(f.body, f.self, m));
          },
          [](const auto&) {},
      },
      m->node);
  return out;
}

std::vector<PSuccessor> step_p(const ExprPtr& m) {
  std::vector<PSuccessor> out = reduce_p(m);  // EP-Red
  if (auto d = decompose(m)) {                // EP-Ctx
    for (auto& [label, inner] : step_p(d->second)) {
      out.emplace_back(label, plug(d->first, inner));
    }
  }
  if (const auto* p = std::get_if<PairExpr>(&m->node)) {  // EP-PairS
    std::vector<PSuccessor> ls = step_p(p->left);
    if (!ls.empty()) {
      std::vector<PSuccessor> rs = step_p(p->right);
      for (const auto& l : ls) {
        for (const auto& r : rs) {
          out.emplace_back(p_label("EP-PairS"), pair(l.second, r.second));
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Checking reduction
// ---------------------------------------------------------------------------

namespace {

// Cast dispatch.  A refinement source is stripped first (RC-Forget); the
// remaining rules are disjoint by the shape of the target.
void reduce_cast(const CastExpr& c, std::vector<CSuccessor>& out) {
  if (!is_value(c.subject)) return;
  const ExprPtr& v = c.subject;
  if (const auto* r = std::get_if<RefineType>(&c.source->node)) {
    out.emplace_back(c_label("RC-Forget"),
                     Command::term(cast(v, r->underlying, c.target)));
    return;
  }
  if (const auto* a = std::get_if<ArrowType>(&c.target->node)) {
    out.emplace_back(
        c_label("RC-Delay"),
        Command::term(delayed(v, c.source, a->domain, a->codomain)));
    return;
  }
  if (const auto* w = std::get_if<WedgeType>(&c.target->node)) {
    out.emplace_back(c_label("RC-WedgeI"),
                     Command::term(pair(cast(v, c.source, w->left),
                                        cast(v, c.source, w->right))));
    return;
  }
  if (const auto* r = std::get_if<RefineType>(&c.target->node)) {
    out.emplace_back(
        c_label("RC-Waiting"),
        Command::term(waiting(cast(v, c.source, r->underlying), r->binder,
                              r->underlying, r->predicate)));
    return;
  }
  bool target_nat = std::holds_alternative<NatType>(c.target->node);
  if (const auto* w = std::get_if<WedgeType>(&c.source->node)) {
    out.emplace_back(c_label(target_nat ? "RC-WedgeN" : "RC-WedgeB"),
                     Command::term(cast(proj(1, v), w->left, c.target)));
    return;
  }
  if (target_nat && std::holds_alternative<NatType>(c.source->node)) {
    out.emplace_back(c_label("RC-Nat"), Command::term(v));
    return;
  }
  if (!target_nat && std::holds_alternative<BoolType>(c.source->node)) {
    out.emplace_back(c_label("RC-Bool"), Command::term(v));
    return;
  }
  // Remaining combinations (e.g. nat => bool) have no rule: stuck.
}

}  // namespace

std::vector<CSuccessor> reduce_c(const ExprPtr& m) {
  std::vector<CSuccessor> out;
  std::visit(
      Overloaded{
          [&](const ProjExpr& p) {
            if (const auto* pr = std::get_if<PairExpr>(&p.subject->node)) {
              if (is_value(pr->left) && is_value(pr->right)) {
                out.emplace_back(c_label("RC-Proj"), Command::term(
                                     p.side == 1 ? pr->left : pr->right));
              }
            }
          },
          [&](const CastExpr& c) { reduce_cast(c, out); },
          [&](const AppExpr& a) {
            const auto* d = std::get_if<DelayedExpr>(&a.fn->node);
            if (!d || !is_value(a.arg)) return;
            TypePtr tgt = arrow(d->target_dom, d->target_cod);
            if (const auto* ar = std::get_if<ArrowType>(&d->source->node)) {
              // RC-Arrow: contravariant argument cast, covariant result cast.
              out.emplace_back(
                  c_label("RC-Arrow"),
                  Command::term(cast(
                      app(d->subject, cast(a.arg, d->target_dom, ar->domain)),
                      ar->codomain, d->target_cod)));
            } else if (const auto* w = std::get_if<WedgeType>(&d->source->node)) {
              out.emplace_back(
                  c_label("RC-WedgeL"),
                  Command::term(
                      app(cast(proj(1, d->subject), w->left, tgt), a.arg)));
              out.emplace_back(
                  c_label("RC-WedgeR"),
                  Command::term(
                      app(cast(proj(2, d->subject), w->right, tgt), a.arg)));
            }
          },
          [&](const WaitingExpr& w) {
            if (is_value(w.subject)) {
              out.emplace_back(
                  c_label("RC-Activate"),
                  Command::term(active(subst(w.predicate, w.binder, w.subject),
                                       w.subject, w.binder, w.underlying,
                                       w.predicate)));
            }
          },
          [&](const ActiveExpr& a) {
            if (const auto* b = std::get_if<BoolExpr>(&a.test->node)) {
              if (b->value) {
                out.emplace_back(c_label("RC-Succeed"),
                                 Command::term(a.subject));
              } else {
                out.emplace_back(c_label("RC-Fail"), Command::blame());
              }
            }
          },
          [](const auto&) {},
      },
      m->node);
  return out;
}

std::vector<CSuccessor> step_c(const ExprPtr& m) {
  std::vector<CSuccessor> out = reduce_c(m);  // EC-Red
  if (auto d = decompose(m)) {
    for (auto& [label, c] : step_c(d->second)) {
      if (c.is_blame()) {
        out.emplace_back(label, Command::blame());  // EB-Ctx
      } else {
        out.emplace_back(label, Command::term(plug(d->first, c.expr())));
      }
    }
  }
  if (const auto* p = std::get_if<PairExpr>(&m->node)) {
    for (auto& [label, c] : step_c(p->left)) {
      if (c.is_blame()) {
        out.emplace_back(c_label("EB-PairL:" + label.rule), Command::blame());
      } else {
        out.emplace_back(c_label("EC-PairL:" + label.rule),
                         Command::term(pair(c.expr(), p->right)));
      }
    }
    for (auto& [label, c] : step_c(p->right)) {
      if (c.is_blame()) {
        out.emplace_back(c_label("EB-PairR:" + label.rule), Command::blame());
      } else {
        out.emplace_back(c_label("EC-PairR:" + label.rule),
                         Command::term(pair(p->left, c.expr())));
      }
    }
  }
  if (const auto* a = std::get_if<ActiveExpr>(&m->node)) {
    // Evaluation inside an active check is always dynamic checking.
    for (auto& [label, test] : step_p(a->test)) {
      out.emplace_back(
          c_label("EC-ActiveP:" + label.rule),
          Command::term(active(test, a->subject, a->binder, a->underlying,
                               a->predicate)));
    }
    for (auto& [label, c] : step_c(a->test)) {
      if (c.is_blame()) {
        out.emplace_back(c_label("EB-Active:" + label.rule), Command::blame());
      } else {
        out.emplace_back(
            c_label("EC-ActiveC:" + label.rule),
            Command::term(active(c.expr(), a->subject, a->binder,
                                 a->underlying, a->predicate)));
      }
    }
  }
  return out;
}

std::vector<CSuccessor> step_all(const Command& c) {
  if (c.is_blame()) return {};
  std::vector<CSuccessor> out;
  for (auto& [label, e] : step_p(c.expr())) {
    out.emplace_back(label, Command::term(e));
  }
  for (auto& succ : step_c(c.expr())) out.push_back(std::move(succ));
  return out;
}

// ---------------------------------------------------------------------------
// Strategy-driven exploration
// ---------------------------------------------------------------------------

namespace {

void push_value(std::vector<ExprPtr>& values, const ExprPtr& v) {
  for (const auto& existing : values) {
    if (alpha_eq(existing, v)) return;
  }
  values.push_back(v);
}

EvalResult eval_path(const Command& start, int fuel,
                     const std::function<std::size_t(std::size_t)>& choose) {
  EvalResult result;
  Command cur = start;
  result.states_explored = 1;
  for (int step = 0; step < fuel; ++step) {
    if (cur.is_blame()) {
      result.blame = true;
      return result;
    }
    if (is_value(cur.expr())) {
      push_value(result.values, cur.expr());
      return result;
    }
    std::vector<CSuccessor> succs = step_all(cur);
    if (succs.empty()) {
      result.stuck.push_back(cur.expr());
      return result;
    }
    cur = succs[choose(succs.size())].second;
    ++result.steps_used;
    ++result.states_explored;
  }
  if (cur.is_blame()) {
    result.blame = true;
  } else if (is_value(cur.expr())) {
    push_value(result.values, cur.expr());
  } else if (step_all(cur).empty()) {
    result.stuck.push_back(cur.expr());
  } else {
    result.fuel_exhausted.push_back(cur.expr());
  }
  return result;
}

EvalResult eval_exhaustive(const Command& start, int fuel, int max_states,
                           int jobs) {
  EvalResult result;
  std::unordered_set<Command, CommandAlphaHash, CommandAlphaEq> visited;
  std::vector<Command> frontier;
  visited.insert(start);
  frontier.push_back(start);
  int depth = 0;
  bool states_capped = false;

  auto expand = [](const Command& c) { return step_all(c); };

  while (!frontier.empty() && depth < fuel && !states_capped) {
    // Successor computation is pure; only the merge touches shared state.
    std::vector<std::vector<CSuccessor>> expansions(frontier.size());
    std::vector<bool> terminal(frontier.size(), false);
    auto work = [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const Command& c = frontier[i];
        if (c.is_blame() || is_value(c.expr())) {
          terminal[i] = true;
        } else {
          expansions[i] = expand(c);
        }
      }
    };
    if (jobs > 1 && frontier.size() > 8) {
      std::size_t chunk =
          (frontier.size() + static_cast<std::size_t>(jobs) - 1) /
          static_cast<std::size_t>(jobs);
      std::vector<std::future<void>> futures;
      for (std::size_t b = 0; b < frontier.size(); b += chunk) {
        std::size_t e = std::min(b + chunk, frontier.size());
        futures.push_back(std::async(std::launch::async, work, b, e));
      }
      for (auto& f : futures) f.get();
    } else {
      work(0, frontier.size());
    }

    std::vector<Command> next;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      const Command& c = frontier[i];
      if (c.is_blame()) {
        result.blame = true;
        continue;
      }
      if (terminal[i]) {
        push_value(result.values, c.expr());
        continue;
      }
      if (expansions[i].empty()) {
        result.stuck.push_back(c.expr());
        continue;
      }
      for (auto& [label, succ] : expansions[i]) {
        if (static_cast<int>(visited.size()) >= max_states) {
          states_capped = true;
          break;
        }
        if (visited.insert(succ).second) next.push_back(succ);
      }
      if (states_capped) {
        // Remaining unexpanded work counts as budget exhaustion.
        for (std::size_t j = i; j < frontier.size(); ++j) {
          if (!terminal[j] && !frontier[j].is_blame()) {
            result.fuel_exhausted.push_back(frontier[j].expr());
          }
        }
        break;
      }
    }
    frontier = std::move(next);
    if (!frontier.empty()) ++depth;
  }

  // Classify whatever remains on the frontier when a budget ran out.
  for (const Command& c : frontier) {
    if (c.is_blame()) {
      result.blame = true;
    } else if (is_value(c.expr())) {
      push_value(result.values, c.expr());
    } else if (step_all(c).empty()) {
      result.stuck.push_back(c.expr());
    } else {
      result.fuel_exhausted.push_back(c.expr());
    }
  }
  result.steps_used = depth;
  result.states_explored = static_cast<int>(visited.size());
  return result;
}

}  // namespace

EvalResult eval(const Command& start, const Strategy& strategy, int fuel,
                int jobs) {
  switch (strategy.kind) {
    case Strategy::Kind::First:
      return eval_path(start, fuel, [](std::size_t) { return 0; });
    case Strategy::Kind::Random: {
      auto rng = std::make_shared<std::mt19937_64>(strategy.seed);
      return eval_path(start, fuel, [rng](std::size_t n) {
        return static_cast<std::size_t>((*rng)() % n);
      });
    }
    case Strategy::Kind::Exhaustive:
      return eval_exhaustive(start, fuel, strategy.max_states, jobs);
  }
  throw std::logic_error("eval: unknown strategy");
}

EvalResult eval(const ExprPtr& m, const Strategy& strategy, int fuel,
                int jobs) {
  return eval(Command::term(m), strategy, fuel, jobs);
}

std::vector<CSuccessor> trace(const ExprPtr& m, const Strategy& strategy,
                              int fuel) {
  if (strategy.kind == Strategy::Kind::Exhaustive) {
    throw std::invalid_argument("trace requires the first or random strategy");
  }
  std::mt19937_64 rng(strategy.seed);
  std::vector<CSuccessor> out;
  Command cur = Command::term(m);
  for (int step = 0; step < fuel; ++step) {
    if (cur.is_blame() || is_value(cur.expr())) break;
    std::vector<CSuccessor> succs = step_all(cur);
    if (succs.empty()) break;
    std::size_t pick = strategy.kind == Strategy::Kind::First
                           ? 0
                           : static_cast<std::size_t>(rng() % succs.size());
    out.push_back(succs[pick]);
    cur = succs[pick].second;
  }
  return out;
}

}  // namespace deltah
