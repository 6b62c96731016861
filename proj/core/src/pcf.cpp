#include "deltah/pcf.hpp"

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace deltah::pcf {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

TypePtr mk_type(Type t) { return std::make_shared<const Type>(std::move(t)); }
ExprPtr mk_expr(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

}  // namespace

TypePtr nat_type() {
  static const TypePtr t = mk_type(Type{NatType{}});
  return t;
}
TypePtr bool_type() {
  static const TypePtr t = mk_type(Type{BoolType{}});
  return t;
}
TypePtr arrow(TypePtr domain, TypePtr codomain) {
  return mk_type(Type{ArrowType{std::move(domain), std::move(codomain)}});
}
bool is_arrow(const TypePtr& t) {
  return std::holds_alternative<ArrowType>(t->node);
}

bool type_eq(const TypePtr& a, const TypePtr& b) {
  if (a->node.index() != b->node.index()) return false;
  if (const auto* x = std::get_if<ArrowType>(&a->node)) {
    const auto& y = std::get<ArrowType>(b->node);
    return type_eq(x->domain, y.domain) && type_eq(x->codomain, y.codomain);
  }
  return true;
}

ExprPtr zero() {
  static const ExprPtr e = mk_expr(Expr{ZeroExpr{}});
  return e;
}
ExprPtr succ(ExprPtr arg) { return mk_expr(Expr{SuccExpr{std::move(arg)}}); }
ExprPtr pred(ExprPtr arg) { return mk_expr(Expr{PredExpr{std::move(arg)}}); }
ExprPtr iszero(ExprPtr arg) {
  return mk_expr(Expr{IsZeroExpr{std::move(arg)}});
}
ExprPtr boolean(bool value) { return mk_expr(Expr{BoolExpr{value}}); }
ExprPtr if_expr(ExprPtr cond, ExprPtr then_branch, ExprPtr else_branch) {
  return mk_expr(Expr{
      IfExpr{std::move(cond), std::move(then_branch), std::move(else_branch)}});
}
ExprPtr var(Name name) { return mk_expr(Expr{VarExpr{std::move(name)}}); }
ExprPtr app(ExprPtr fn, ExprPtr arg) {
  return mk_expr(Expr{AppExpr{std::move(fn), std::move(arg)}});
}
ExprPtr abs(Name param, TypePtr annotation, ExprPtr body) {
  return mk_expr(Expr{
      AbsExpr{std::move(param), std::move(annotation), std::move(body)}});
}
ExprPtr fix(Name self, TypePtr annotation, ExprPtr body) {
  if (!is_arrow(annotation)) {
    throw std::invalid_argument("pcf::fix: annotation must be an arrow type");
  }
  if (!std::holds_alternative<AbsExpr>(body->node)) {
    throw std::invalid_argument("pcf::fix: body must be a lambda");
  }
  return mk_expr(Expr{
      FixExpr{std::move(self), std::move(annotation), std::move(body)}});
}

ExprPtr numeral(std::uint64_t n) {
  ExprPtr e = zero();
  for (std::uint64_t i = 0; i < n; ++i) e = succ(e);
  return e;
}

std::optional<std::uint64_t> numeral_value(const ExprPtr& e) {
  std::uint64_t n = 0;
  const Expr* cur = e.get();
  while (true) {
    if (std::holds_alternative<ZeroExpr>(cur->node)) return n;
    if (const auto* s = std::get_if<SuccExpr>(&cur->node)) {
      ++n;
      cur = s->arg.get();
      continue;
    }
    return std::nullopt;
  }
}

bool is_numeral(const ExprPtr& e) { return numeral_value(e).has_value(); }

bool is_value(const ExprPtr& e) {
  return std::visit(
      Overloaded{
          [](const ZeroExpr&) { return true; },
          [&](const SuccExpr&) { return is_numeral(e); },
          [](const BoolExpr&) { return true; },
          [](const AbsExpr&) { return true; },
          [](const auto&) { return false; },
      },
      e->node);
}

// ---------------------------------------------------------------------------
// Binding metaoperations
// ---------------------------------------------------------------------------

namespace {

void fv(const ExprPtr& e, std::set<Name>& bound, std::set<Name>& out) {
  std::visit(
      Overloaded{
          [](const ZeroExpr&) {},
          [](const BoolExpr&) {},
          [&](const SuccExpr& s) { fv(s.arg, bound, out); },
          [&](const PredExpr& s) { fv(s.arg, bound, out); },
          [&](const IsZeroExpr& s) { fv(s.arg, bound, out); },
          [&](const IfExpr& i) {
            fv(i.cond, bound, out);
            fv(i.then_branch, bound, out);
            fv(i.else_branch, bound, out);
          },
          [&](const VarExpr& v) {
            if (!bound.count(v.name)) out.insert(v.name);
          },
          [&](const AppExpr& a) {
            fv(a.fn, bound, out);
            fv(a.arg, bound, out);
          },
          [&](const AbsExpr& a) {
            bool inserted = bound.insert(a.param).second;
            fv(a.body, bound, out);
            if (inserted) bound.erase(a.param);
          },
          [&](const FixExpr& f) {
            bool inserted = bound.insert(f.self).second;
            fv(f.body, bound, out);
            if (inserted) bound.erase(f.self);
          },
      },
      e->node);
}

Name fresh(const Name& base, const std::set<Name>& avoid) {
  if (!avoid.count(base)) return base;
  Name c = base;
  do {
    c += '\'';
  } while (avoid.count(c));
  return c;
}

}  // namespace

std::set<Name> free_vars(const ExprPtr& e) {
  std::set<Name> bound, out;
  fv(e, bound, out);
  return out;
}

ExprPtr subst(const ExprPtr& t, const Name& x, const ExprPtr& n) {
  std::set<Name> n_free = free_vars(n);
  std::function<ExprPtr(const ExprPtr&)> go = [&](const ExprPtr& e) -> ExprPtr {
    return std::visit(
        Overloaded{
            [&](const ZeroExpr&) { return e; },
            [&](const BoolExpr&) { return e; },
            [&](const SuccExpr& s) { return succ(go(s.arg)); },
            [&](const PredExpr& s) { return pred(go(s.arg)); },
            [&](const IsZeroExpr& s) { return iszero(go(s.arg)); },
            [&](const IfExpr& i) {
              return if_expr(go(i.cond), go(i.then_branch), go(i.else_branch));
            },
            [&](const VarExpr& v) { return v.name == x ? n : e; },
            [&](const AppExpr& a) { return app(go(a.fn), go(a.arg)); },
            [&](const AbsExpr& a) -> ExprPtr {
              if (a.param == x) return e;
              if (!n_free.count(a.param)) {
                return abs(a.param, a.annotation, go(a.body));
              }
              std::set<Name> avoid = n_free;
              avoid.insert(x);
              for (const Name& v : free_vars(a.body)) avoid.insert(v);
              Name p2 = fresh(a.param, avoid);
              return abs(p2, a.annotation, go(subst(a.body, a.param, var(p2))));
            },
            [&](const FixExpr& f) -> ExprPtr {
              if (f.self == x) return e;
              if (!n_free.count(f.self)) {
                return fix(f.self, f.annotation, go(f.body));
              }
              std::set<Name> avoid = n_free;
              avoid.insert(x);
              for (const Name& v : free_vars(f.body)) avoid.insert(v);
              Name s2 = fresh(f.self, avoid);
              return fix(s2, f.annotation, go(subst(f.body, f.self, var(s2))));
            },
        },
        e->node);
  };
  return go(t);
}

namespace {

bool aeq(const ExprPtr& a, const ExprPtr& b,
         std::vector<std::pair<Name, Name>>& env) {
  auto var_eq = [&](const Name& x, const Name& y) {
    for (auto it = env.rbegin(); it != env.rend(); ++it) {
      bool lx = it->first == x;
      bool ly = it->second == y;
      if (lx || ly) return lx && ly;
    }
    return x == y;
  };
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      Overloaded{
          [](const ZeroExpr&) { return true; },
          [&](const BoolExpr& x) {
            return x.value == std::get<BoolExpr>(b->node).value;
          },
          [&](const SuccExpr& x) {
            return aeq(x.arg, std::get<SuccExpr>(b->node).arg, env);
          },
          [&](const PredExpr& x) {
            return aeq(x.arg, std::get<PredExpr>(b->node).arg, env);
          },
          [&](const IsZeroExpr& x) {
            return aeq(x.arg, std::get<IsZeroExpr>(b->node).arg, env);
          },
          [&](const IfExpr& x) {
            const auto& y = std::get<IfExpr>(b->node);
            return aeq(x.cond, y.cond, env) &&
                   aeq(x.then_branch, y.then_branch, env) &&
                   aeq(x.else_branch, y.else_branch, env);
          },
          [&](const VarExpr& x) {
            return var_eq(x.name, std::get<VarExpr>(b->node).name);
          },
          [&](const AppExpr& x) {
            const auto& y = std::get<AppExpr>(b->node);
            return aeq(x.fn, y.fn, env) && aeq(x.arg, y.arg, env);
          },
          [&](const AbsExpr& x) {
            const auto& y = std::get<AbsExpr>(b->node);
            if (!type_eq(x.annotation, y.annotation)) return false;
            env.emplace_back(x.param, y.param);
            bool r = aeq(x.body, y.body, env);
            env.pop_back();
            return r;
          },
          [&](const FixExpr& x) {
            const auto& y = std::get<FixExpr>(b->node);
            if (!type_eq(x.annotation, y.annotation)) return false;
            env.emplace_back(x.self, y.self);
            bool r = aeq(x.body, y.body, env);
            env.pop_back();
            return r;
          },
      },
      a->node);
}

}  // namespace

bool alpha_eq(const ExprPtr& a, const ExprPtr& b) {
  std::vector<std::pair<Name, Name>> env;
  return aeq(a, b, env);
}

// ---------------------------------------------------------------------------
// Small-step semantics
// ---------------------------------------------------------------------------

namespace {

// Root reductions only; the context rule is handled in step_in.
std::optional<std::pair<std::string, ExprPtr>> root_step(const ExprPtr& m) {
  using Out = std::optional<std::pair<std::string, ExprPtr>>;
  return std::visit(
      Overloaded{
          [&](const PredExpr& p) -> Out {
            if (std::holds_alternative<ZeroExpr>(p.arg->node)) {
              return std::pair{std::string("PCF-Pred-Z"), zero()};
            }
            if (const auto* s = std::get_if<SuccExpr>(&p.arg->node)) {
              if (is_numeral(s->arg)) {
                return std::pair{std::string("PCF-Pred"), s->arg};
              }
            }
            return std::nullopt;
          },
          [&](const IsZeroExpr& z) -> Out {
            if (std::holds_alternative<ZeroExpr>(z.arg->node)) {
              return std::pair{std::string("PCF-IsZero-T"), boolean(true)};
            }
            if (const auto* s = std::get_if<SuccExpr>(&z.arg->node)) {
              if (is_numeral(s->arg)) {
                return std::pair{std::string("PCF-IsZero-F"), boolean(false)};
              }
            }
            return std::nullopt;
          },
          [&](const IfExpr& i) -> Out {
            if (const auto* b = std::get_if<BoolExpr>(&i.cond->node)) {
              return std::pair{std::string(b->value ? "PCF-If-T" : "PCF-If-F"),
                               b->value ? i.then_branch : i.else_branch};
            }
            return std::nullopt;
          },
          [&](const AppExpr& a) -> Out {
            if (const auto* f = std::get_if<AbsExpr>(&a.fn->node)) {
              if (is_value(a.arg)) {
                return std::pair{std::string("PCF-Beta"),
                                 subst(f->body, f->param, a.arg)};
              }
            }
            return std::nullopt;
          },
          [&](const FixExpr& f) -> Out {
            return std::pair{std::string("PCF-Fix"),
                             subst(f.body, f.self, m)};
          },
          [](const auto&) -> Out { return std::nullopt; },
      },
      m->node);
}

// PCF-Ctx: descends through the unique call-by-value frame.
std::optional<std::pair<std::string, ExprPtr>> step_in(const ExprPtr& m) {
  if (is_value(m)) return std::nullopt;
  if (auto r = root_step(m)) return r;
  using Out = std::optional<std::pair<std::string, ExprPtr>>;
  auto lift = [&](const ExprPtr& sub,
                  auto rebuild) -> Out {
    auto inner = step_in(sub);
    if (!inner) return std::nullopt;
    return std::pair{inner->first, rebuild(inner->second)};
  };
  return std::visit(
      Overloaded{
          [&](const SuccExpr& s) -> Out {
            if (is_value(s.arg)) return std::nullopt;
            return lift(s.arg, [](ExprPtr x) { return succ(std::move(x)); });
          },
          [&](const PredExpr& s) -> Out {
            if (is_value(s.arg)) return std::nullopt;
            return lift(s.arg, [](ExprPtr x) { return pred(std::move(x)); });
          },
          [&](const IsZeroExpr& s) -> Out {
            if (is_value(s.arg)) return std::nullopt;
            return lift(s.arg, [](ExprPtr x) { return iszero(std::move(x)); });
          },
          [&](const IfExpr& i) -> Out {
            if (is_value(i.cond)) return std::nullopt;
            return lift(i.cond, [&](ExprPtr x) {
              return if_expr(std::move(x), i.then_branch, i.else_branch);
            });
          },
          [&](const AppExpr& a) -> Out {
            if (!is_value(a.fn)) {
              return lift(a.fn,
                          [&](ExprPtr x) { return app(std::move(x), a.arg); });
            }
            if (!is_value(a.arg)) {
              return lift(a.arg,
                          [&](ExprPtr x) { return app(a.fn, std::move(x)); });
            }
            return std::nullopt;
          },
          [](const auto&) -> Out { return std::nullopt; },
      },
      m->node);
}

}  // namespace

std::optional<std::pair<std::string, ExprPtr>> pcf_step_labeled(
    const ExprPtr& m) {
  return step_in(m);
}

std::optional<ExprPtr> pcf_step(const ExprPtr& m) {
  auto r = step_in(m);
  if (!r) return std::nullopt;
  return r->second;
}

EvalOutcome pcf_eval(const ExprPtr& m, int fuel) {
  ExprPtr cur = m;
  int steps = 0;
  while (steps < fuel) {
    if (is_value(cur)) return {EvalOutcome::Kind::Value, cur, steps};
    auto next = pcf_step(cur);
    if (!next) return {EvalOutcome::Kind::Stuck, cur, steps};
    cur = *next;
    ++steps;
  }
  if (is_value(cur)) return {EvalOutcome::Kind::Value, cur, steps};
  if (!pcf_step(cur)) return {EvalOutcome::Kind::Stuck, cur, steps};
  return {EvalOutcome::Kind::FuelExhausted, cur, steps};
}

}  // namespace deltah::pcf
