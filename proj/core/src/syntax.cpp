#include "deltah/syntax.hpp"

#include <functional>
#include <stdexcept>

namespace deltah {

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

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

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

TypePtr wedge(TypePtr left, TypePtr right) {
  return mk_type(Type{WedgeType{std::move(left), std::move(right)}});
}

TypePtr refine(Name binder, TypePtr underlying, ExprPtr predicate) {
  return mk_type(Type{
      RefineType{std::move(binder), std::move(underlying), std::move(predicate)}});
}

bool is_arrow(const TypePtr& t) {
  return std::holds_alternative<ArrowType>(t->node);
}
bool is_wedge(const TypePtr& t) {
  return std::holds_alternative<WedgeType>(t->node);
}
bool is_refine(const TypePtr& t) {
  return std::holds_alternative<RefineType>(t->node);
}

bool is_interface_type(const TypePtr& t) {
  if (is_arrow(t)) return true;
  if (const auto* w = std::get_if<WedgeType>(&t->node)) {
    return is_interface_type(w->left) && is_interface_type(w->right);
  }
  return false;
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
ExprPtr true_expr() {
  static const ExprPtr e = boolean(true);
  return e;
}
ExprPtr false_expr() {
  static const ExprPtr e = boolean(false);
  return e;
}
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
  if (!is_recursion_body(body)) {
    throw std::invalid_argument(
        "fix: body must be a lambda or a pair of recursion bodies");
  }
  return mk_expr(Expr{
      FixExpr{std::move(self), std::move(annotation), std::move(body)}});
}
ExprPtr pair(ExprPtr left, ExprPtr right) {
  return mk_expr(Expr{PairExpr{std::move(left), std::move(right)}});
}
ExprPtr proj(int side, ExprPtr subject) {
  if (side != 1 && side != 2) throw std::invalid_argument("proj: side must be 1 or 2");
  return mk_expr(Expr{ProjExpr{side, std::move(subject)}});
}
ExprPtr cast(ExprPtr subject, TypePtr source, TypePtr target) {
  return mk_expr(Expr{
      CastExpr{std::move(subject), std::move(source), std::move(target)}});
}
ExprPtr delayed(ExprPtr subject, TypePtr source, TypePtr target_dom,
                TypePtr target_cod) {
  if (!is_value(subject)) {
    throw std::invalid_argument("delayed: subject must be a value");
  }
  return mk_expr(Expr{DelayedExpr{std::move(subject), std::move(source),
                                  std::move(target_dom), std::move(target_cod)}});
}
ExprPtr waiting(ExprPtr subject, Name binder, TypePtr underlying,
                ExprPtr predicate) {
  return mk_expr(Expr{WaitingExpr{std::move(subject), std::move(binder),
                                  std::move(underlying), std::move(predicate)}});
}
ExprPtr active(ExprPtr test, ExprPtr subject, Name binder, TypePtr underlying,
               ExprPtr predicate) {
  if (!is_value(subject)) {
    throw std::invalid_argument("active: subject must be a value");
  }
  return mk_expr(Expr{ActiveExpr{std::move(test), std::move(subject),
                                 std::move(binder), std::move(underlying),
                                 std::move(predicate)}});
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

// ---------------------------------------------------------------------------
// Classifiers
// ---------------------------------------------------------------------------

bool is_numeral(const ExprPtr& e) { return numeral_value(e).has_value(); }

bool is_value(const ExprPtr& e) {
  return std::visit(
      Overloaded{
          [](const ZeroExpr&) { return true; },
          [&](const SuccExpr&) { return is_numeral(e); },
          [](const BoolExpr&) { return true; },
          [](const AbsExpr&) { return true; },
          [](const PairExpr& p) {
            return is_value(p.left) && is_value(p.right);
          },
          [](const DelayedExpr&) { return true; },
          [](const auto&) { return false; },
      },
      e->node);
}

bool is_recursion_body(const ExprPtr& e) {
  if (std::holds_alternative<AbsExpr>(e->node)) return true;
  if (const auto* p = std::get_if<PairExpr>(&e->node)) {
    return is_recursion_body(p->left) && is_recursion_body(p->right);
  }
  return false;
}

bool is_runtime_form(const ExprPtr& e) {
  return std::holds_alternative<DelayedExpr>(e->node) ||
         std::holds_alternative<WaitingExpr>(e->node) ||
         std::holds_alternative<ActiveExpr>(e->node);
}

bool contains_runtime_form(const TypePtr& t) {
  return std::visit(
      Overloaded{
          [](const NatType&) { return false; },
          [](const BoolType&) { return false; },
          [](const ArrowType& a) {
            return contains_runtime_form(a.domain) ||
                   contains_runtime_form(a.codomain);
          },
          [](const WedgeType& w) {
            return contains_runtime_form(w.left) ||
                   contains_runtime_form(w.right);
          },
          [](const RefineType& r) {
            return contains_runtime_form(r.underlying) ||
                   contains_runtime_form(r.predicate);
          },
      },
      t->node);
}

bool contains_runtime_form(const ExprPtr& e) {
  if (is_runtime_form(e)) return true;
  return std::visit(
      Overloaded{
          [](const ZeroExpr&) { return false; },
          [](const BoolExpr&) { return false; },
          [](const VarExpr&) { return false; },
          [](const SuccExpr& s) { return contains_runtime_form(s.arg); },
          [](const PredExpr& s) { return contains_runtime_form(s.arg); },
          [](const IsZeroExpr& s) { return contains_runtime_form(s.arg); },
          [](const IfExpr& i) {
            return contains_runtime_form(i.cond) ||
                   contains_runtime_form(i.then_branch) ||
                   contains_runtime_form(i.else_branch);
          },
          [](const AppExpr& a) {
            return contains_runtime_form(a.fn) || contains_runtime_form(a.arg);
          },
          [](const AbsExpr& a) {
            return contains_runtime_form(a.annotation) ||
                   contains_runtime_form(a.body);
          },
          [](const FixExpr& f) {
            return contains_runtime_form(f.annotation) ||
                   contains_runtime_form(f.body);
          },
          [](const PairExpr& p) {
            return contains_runtime_form(p.left) ||
                   contains_runtime_form(p.right);
          },
          [](const ProjExpr& p) { return contains_runtime_form(p.subject); },
          [](const CastExpr& c) {
            return contains_runtime_form(c.subject) ||
                   contains_runtime_form(c.source) ||
                   contains_runtime_form(c.target);
          },
          [](const auto&) { return true; },  // run-time forms, caught above
      },
      e->node);
}

SyntaxClass classify(const ExprPtr& e) {
  if (is_value(e)) return SyntaxClass::Value;
  if (is_recursion_body(e)) return SyntaxClass::RecursionBody;
  if (is_runtime_form(e)) return SyntaxClass::RuntimeForm;
  return SyntaxClass::Plain;
}

// ---------------------------------------------------------------------------
// Free variables
// ---------------------------------------------------------------------------

namespace {

void fv_expr(const ExprPtr& e, std::set<Name>& bound, std::set<Name>& out);

void fv_type(const TypePtr& t, std::set<Name>& bound, std::set<Name>& out) {
  std::visit(
      Overloaded{
          [](const NatType&) {},
          [](const BoolType&) {},
          [&](const ArrowType& a) {
            fv_type(a.domain, bound, out);
            fv_type(a.codomain, bound, out);
          },
          [&](const WedgeType& w) {
            fv_type(w.left, bound, out);
            fv_type(w.right, bound, out);
          },
          [&](const RefineType& r) {
            fv_type(r.underlying, bound, out);
            bool inserted = bound.insert(r.binder).second;
            fv_expr(r.predicate, bound, out);
            if (inserted) bound.erase(r.binder);
          },
      },
      t->node);
}

void fv_expr(const ExprPtr& e, std::set<Name>& bound, std::set<Name>& out) {
  std::visit(
      Overloaded{
          [](const ZeroExpr&) {},
          [](const BoolExpr&) {},
          [&](const SuccExpr& s) { fv_expr(s.arg, bound, out); },
          [&](const PredExpr& s) { fv_expr(s.arg, bound, out); },
          [&](const IsZeroExpr& s) { fv_expr(s.arg, bound, out); },
          [&](const IfExpr& i) {
            fv_expr(i.cond, bound, out);
            fv_expr(i.then_branch, bound, out);
            fv_expr(i.else_branch, bound, out);
          },
          [&](const VarExpr& v) {
            if (!bound.count(v.name)) out.insert(v.name);
          },
          [&](const AppExpr& a) {
            fv_expr(a.fn, bound, out);
            fv_expr(a.arg, bound, out);
          },
          [&](const AbsExpr& a) {
            fv_type(a.annotation, bound, out);
            bool inserted = bound.insert(a.param).second;
            fv_expr(a.body, bound, out);
            if (inserted) bound.erase(a.param);
          },
          [&](const FixExpr& f) {
            fv_type(f.annotation, bound, out);
            bool inserted = bound.insert(f.self).second;
            fv_expr(f.body, bound, out);
            if (inserted) bound.erase(f.self);
          },
          [&](const PairExpr& p) {
            fv_expr(p.left, bound, out);
            fv_expr(p.right, bound, out);
          },
          [&](const ProjExpr& p) { fv_expr(p.subject, bound, out); },
          [&](const CastExpr& c) {
            fv_expr(c.subject, bound, out);
            fv_type(c.source, bound, out);
            fv_type(c.target, bound, out);
          },
          [&](const DelayedExpr& d) {
            fv_expr(d.subject, bound, out);
            fv_type(d.source, bound, out);
            fv_type(d.target_dom, bound, out);
            fv_type(d.target_cod, bound, out);
          },
          [&](const WaitingExpr& w) {
            fv_expr(w.subject, bound, out);
            fv_type(w.underlying, bound, out);
            bool inserted = bound.insert(w.binder).second;
            fv_expr(w.predicate, bound, out);
            if (inserted) bound.erase(w.binder);
          },
          [&](const ActiveExpr& a) {
            fv_expr(a.test, bound, out);
            fv_expr(a.subject, bound, out);
            fv_type(a.underlying, bound, out);
            bool inserted = bound.insert(a.binder).second;
            fv_expr(a.predicate, bound, out);
            if (inserted) bound.erase(a.binder);
          },
      },
      e->node);
}

}  // namespace

std::set<Name> free_vars(const ExprPtr& e) {
  std::set<Name> bound, out;
  fv_expr(e, bound, out);
  return out;
}

std::set<Name> free_vars(const TypePtr& t) {
  std::set<Name> bound, out;
  fv_type(t, bound, out);
  return out;
}

Name fresh_name(const Name& base, const std::set<Name>& avoid) {
  if (!avoid.count(base)) return base;
  Name candidate = base;
  do {
    candidate += '\'';
  } while (avoid.count(candidate));
  return candidate;
}

// ---------------------------------------------------------------------------
// Capture-avoiding substitution
// ---------------------------------------------------------------------------

namespace {

struct Subst {
  Name x;
  ExprPtr n;
  std::set<Name> n_free;

  // Handles one binder: either stops (shadowing), or renames the binder away
  // from the free variables of the substituted term.
  template <typename Rebuild>
  ExprPtr under_binder(const Name& binder, const ExprPtr& body,
                       Rebuild rebuild) {
    if (binder == x) return rebuild(binder, body);  // shadowed: leave body
    if (!n_free.count(binder)) return rebuild(binder, expr(body));
    std::set<Name> avoid = n_free;
    avoid.insert(x);
    for (const Name& v : free_vars(body)) avoid.insert(v);
    Name b2 = fresh_name(binder, avoid);
    ExprPtr renamed = [&] {
      Subst rename{binder, var(b2), {b2}};
      return rename.expr(body);
    }();
    return rebuild(b2, expr(renamed));
  }

  TypePtr type(const TypePtr& t) {
    return std::visit(
        Overloaded{
            [&](const NatType&) { return t; },
            [&](const BoolType&) { return t; },
            [&](const ArrowType& a) {
              return arrow(type(a.domain), type(a.codomain));
            },
            [&](const WedgeType& w) {
              return wedge(type(w.left), type(w.right));
            },
            [&](const RefineType& r) {
              TypePtr u = type(r.underlying);
              if (r.binder == x) return refine(r.binder, u, r.predicate);
              if (!n_free.count(r.binder)) {
                return refine(r.binder, u, expr(r.predicate));
              }
              std::set<Name> avoid = n_free;
              avoid.insert(x);
              for (const Name& v : free_vars(r.predicate)) avoid.insert(v);
              Name b2 = fresh_name(r.binder, avoid);
              Subst rename{r.binder, var(b2), {b2}};
              return refine(b2, u, expr(rename.expr(r.predicate)));
            },
        },
        t->node);
  }

  ExprPtr expr(const ExprPtr& e) {
    return std::visit(
        Overloaded{
            [&](const ZeroExpr&) { return e; },
            [&](const BoolExpr&) { return e; },
            [&](const SuccExpr& s) { return succ(expr(s.arg)); },
            [&](const PredExpr& s) { return pred(expr(s.arg)); },
            [&](const IsZeroExpr& s) { return iszero(expr(s.arg)); },
            [&](const IfExpr& i) {
              return if_expr(expr(i.cond), expr(i.then_branch),
                             expr(i.else_branch));
            },
            [&](const VarExpr& v) { return v.name == x ? n : e; },
            [&](const AppExpr& a) { return app(expr(a.fn), expr(a.arg)); },
            [&](const AbsExpr& a) {
              TypePtr ann = type(a.annotation);
              return under_binder(a.param, a.body,
                                  [&](const Name& b, const ExprPtr& body) {
                                    return abs(b, ann, body);
                                  });
            },
            [&](const FixExpr& f) {
              TypePtr ann = type(f.annotation);
              return under_binder(f.self, f.body,
                                  [&](const Name& b, const ExprPtr& body) {
                                    return fix(b, ann, body);
                                  });
            },
            [&](const PairExpr& p) {
              return pair(expr(p.left), expr(p.right));
            },
            [&](const ProjExpr& p) { return proj(p.side, expr(p.subject)); },
            [&](const CastExpr& c) {
              return cast(expr(c.subject), type(c.source), type(c.target));
            },
            [&](const DelayedExpr& d) {
              return delayed(expr(d.subject), type(d.source),
                             type(d.target_dom), type(d.target_cod));
            },
            [&](const WaitingExpr& w) {
              ExprPtr subj = expr(w.subject);
              TypePtr u = type(w.underlying);
              return under_binder(w.binder, w.predicate,
                                  [&](const Name& b, const ExprPtr& p) {
                                    return waiting(subj, b, u, p);
                                  });
            },
            [&](const ActiveExpr& a) {
              ExprPtr test = expr(a.test);
              ExprPtr subj = expr(a.subject);
              TypePtr u = type(a.underlying);
              return under_binder(a.binder, a.predicate,
                                  [&](const Name& b, const ExprPtr& p) {
                                    return active(test, subj, b, u, p);
                                  });
            },
        },
        e->node);
  }
};

}  // namespace

ExprPtr subst(const ExprPtr& t, const Name& x, const ExprPtr& n) {
  Subst s{x, n, free_vars(n)};
  return s.expr(t);
}

TypePtr subst(const TypePtr& t, const Name& x, const ExprPtr& n) {
  Subst s{x, n, free_vars(n)};
  return s.type(t);
}

// ---------------------------------------------------------------------------
// Alpha equivalence
// ---------------------------------------------------------------------------

namespace {

// Parallel binder stacks; a variable matches when both sides resolve to the
// same stack depth, or both are free with the same name.
struct AlphaEnv {
  std::vector<std::pair<Name, Name>> binders;

  bool var_eq(const Name& a, const Name& b) const {
    for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
      bool la = it->first == a;
      bool lb = it->second == b;
      if (la || lb) return la && lb;
    }
    return a == b;
  }
};

bool aeq_expr(const ExprPtr& a, const ExprPtr& b, AlphaEnv& env);

bool aeq_type(const TypePtr& a, const TypePtr& b, AlphaEnv& env) {
  if (a.get() == b.get() && env.binders.empty()) return true;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      Overloaded{
          [](const NatType&) { return true; },
          [](const BoolType&) { return true; },
          [&](const ArrowType& x) {
            const auto& y = std::get<ArrowType>(b->node);
            return aeq_type(x.domain, y.domain, env) &&
                   aeq_type(x.codomain, y.codomain, env);
          },
          [&](const WedgeType& x) {
            const auto& y = std::get<WedgeType>(b->node);
            return aeq_type(x.left, y.left, env) &&
                   aeq_type(x.right, y.right, env);
          },
          [&](const RefineType& x) {
            const auto& y = std::get<RefineType>(b->node);
            if (!aeq_type(x.underlying, y.underlying, env)) return false;
            env.binders.emplace_back(x.binder, y.binder);
            bool r = aeq_expr(x.predicate, y.predicate, env);
            env.binders.pop_back();
            return r;
          },
      },
      a->node);
}

bool aeq_expr(const ExprPtr& a, const ExprPtr& b, AlphaEnv& env) {
  if (a.get() == b.get() && env.binders.empty()) return true;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      Overloaded{
          [](const ZeroExpr&) { return true; },
          [&](const BoolExpr& x) {
            return x.value == std::get<BoolExpr>(b->node).value;
          },
          [&](const SuccExpr& x) {
            return aeq_expr(x.arg, std::get<SuccExpr>(b->node).arg, env);
          },
          [&](const PredExpr& x) {
            return aeq_expr(x.arg, std::get<PredExpr>(b->node).arg, env);
          },
          [&](const IsZeroExpr& x) {
            return aeq_expr(x.arg, std::get<IsZeroExpr>(b->node).arg, env);
          },
          [&](const IfExpr& x) {
            const auto& y = std::get<IfExpr>(b->node);
            return aeq_expr(x.cond, y.cond, env) &&
                   aeq_expr(x.then_branch, y.then_branch, env) &&
                   aeq_expr(x.else_branch, y.else_branch, env);
          },
          [&](const VarExpr& x) {
            return env.var_eq(x.name, std::get<VarExpr>(b->node).name);
          },
          [&](const AppExpr& x) {
            const auto& y = std::get<AppExpr>(b->node);
            return aeq_expr(x.fn, y.fn, env) && aeq_expr(x.arg, y.arg, env);
          },
          [&](const AbsExpr& x) {
            const auto& y = std::get<AbsExpr>(b->node);
            if (!aeq_type(x.annotation, y.annotation, env)) return false;
            env.binders.emplace_back(x.param, y.param);
            bool r = aeq_expr(x.body, y.body, env);
            env.binders.pop_back();
            return r;
          },
          [&](const FixExpr& x) {
            const auto& y = std::get<FixExpr>(b->node);
            if (!aeq_type(x.annotation, y.annotation, env)) return false;
            env.binders.emplace_back(x.self, y.self);
            bool r = aeq_expr(x.body, y.body, env);
            env.binders.pop_back();
            return r;
          },
          [&](const PairExpr& x) {
            const auto& y = std::get<PairExpr>(b->node);
            return aeq_expr(x.left, y.left, env) &&
                   aeq_expr(x.right, y.right, env);
          },
          [&](const ProjExpr& x) {
            const auto& y = std::get<ProjExpr>(b->node);
            return x.side == y.side && aeq_expr(x.subject, y.subject, env);
          },
          [&](const CastExpr& x) {
            const auto& y = std::get<CastExpr>(b->node);
            return aeq_expr(x.subject, y.subject, env) &&
                   aeq_type(x.source, y.source, env) &&
                   aeq_type(x.target, y.target, env);
          },
          [&](const DelayedExpr& x) {
            const auto& y = std::get<DelayedExpr>(b->node);
            return aeq_expr(x.subject, y.subject, env) &&
                   aeq_type(x.source, y.source, env) &&
                   aeq_type(x.target_dom, y.target_dom, env) &&
                   aeq_type(x.target_cod, y.target_cod, env);
          },
          [&](const WaitingExpr& x) {
            const auto& y = std::get<WaitingExpr>(b->node);
            if (!aeq_expr(x.subject, y.subject, env)) return false;
            if (!aeq_type(x.underlying, y.underlying, env)) return false;
            env.binders.emplace_back(x.binder, y.binder);
            bool r = aeq_expr(x.predicate, y.predicate, env);
            env.binders.pop_back();
            return r;
          },
          [&](const ActiveExpr& x) {
            const auto& y = std::get<ActiveExpr>(b->node);
            if (!aeq_expr(x.test, y.test, env)) return false;
            if (!aeq_expr(x.subject, y.subject, env)) return false;
            if (!aeq_type(x.underlying, y.underlying, env)) return false;
            env.binders.emplace_back(x.binder, y.binder);
            bool r = aeq_expr(x.predicate, y.predicate, env);
            env.binders.pop_back();
            return r;
          },
      },
      a->node);
}

}  // namespace

bool alpha_eq(const ExprPtr& a, const ExprPtr& b) {
  AlphaEnv env;
  return aeq_expr(a, b, env);
}

bool alpha_eq(const TypePtr& a, const TypePtr& b) {
  AlphaEnv env;
  return aeq_type(a, b, env);
}

bool alpha_eq(const Command& a, const Command& b) {
  if (a.is_blame() || b.is_blame()) return a.is_blame() == b.is_blame();
  return alpha_eq(a.expr(), b.expr());
}

// ---------------------------------------------------------------------------
// Alpha-invariant hashing
// ---------------------------------------------------------------------------

namespace {

void hash_combine(std::size_t& seed, std::size_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

struct AlphaHasher {
  std::vector<Name> binders;

  std::size_t var_code(const Name& n) const {
    for (std::size_t i = binders.size(); i-- > 0;) {
      if (binders[i] == n) {
        // Bound: hash by de Bruijn index.
        return 0x8000000000000000ULL + (binders.size() - 1 - i);
      }
    }
    return std::hash<Name>{}(n);
  }

  std::size_t type(const TypePtr& t) {
    std::size_t h = t->node.index() * 0x9e3779b1u + 0xabcd;
    std::visit(
        Overloaded{
            [](const NatType&) {},
            [](const BoolType&) {},
            [&](const ArrowType& a) {
              hash_combine(h, type(a.domain));
              hash_combine(h, type(a.codomain));
            },
            [&](const WedgeType& w) {
              hash_combine(h, type(w.left));
              hash_combine(h, type(w.right));
            },
            [&](const RefineType& r) {
              hash_combine(h, type(r.underlying));
              binders.push_back(r.binder);
              hash_combine(h, expr(r.predicate));
              binders.pop_back();
            },
        },
        t->node);
    return h;
  }

  std::size_t expr(const ExprPtr& e) {
    std::size_t h = e->node.index() * 0x85ebca6bu + 0x1234;
    std::visit(
        Overloaded{
            [](const ZeroExpr&) {},
            [&](const BoolExpr& b) { hash_combine(h, b.value ? 2 : 1); },
            [&](const SuccExpr& s) { hash_combine(h, expr(s.arg)); },
            [&](const PredExpr& s) { hash_combine(h, expr(s.arg)); },
            [&](const IsZeroExpr& s) { hash_combine(h, expr(s.arg)); },
            [&](const IfExpr& i) {
              hash_combine(h, expr(i.cond));
              hash_combine(h, expr(i.then_branch));
              hash_combine(h, expr(i.else_branch));
            },
            [&](const VarExpr& v) { hash_combine(h, var_code(v.name)); },
            [&](const AppExpr& a) {
              hash_combine(h, expr(a.fn));
              hash_combine(h, expr(a.arg));
            },
            [&](const AbsExpr& a) {
              hash_combine(h, type(a.annotation));
              binders.push_back(a.param);
              hash_combine(h, expr(a.body));
              binders.pop_back();
            },
            [&](const FixExpr& f) {
              hash_combine(h, type(f.annotation));
              binders.push_back(f.self);
              hash_combine(h, expr(f.body));
              binders.pop_back();
            },
            [&](const PairExpr& p) {
              hash_combine(h, expr(p.left));
              hash_combine(h, expr(p.right));
            },
            [&](const ProjExpr& p) {
              hash_combine(h, static_cast<std::size_t>(p.side));
              hash_combine(h, expr(p.subject));
            },
            [&](const CastExpr& c) {
              hash_combine(h, expr(c.subject));
              hash_combine(h, type(c.source));
              hash_combine(h, type(c.target));
            },
            [&](const DelayedExpr& d) {
              hash_combine(h, expr(d.subject));
              hash_combine(h, type(d.source));
              hash_combine(h, type(d.target_dom));
              hash_combine(h, type(d.target_cod));
            },
            [&](const WaitingExpr& w) {
              hash_combine(h, expr(w.subject));
              hash_combine(h, type(w.underlying));
              binders.push_back(w.binder);
              hash_combine(h, expr(w.predicate));
              binders.pop_back();
            },
            [&](const ActiveExpr& a) {
              hash_combine(h, expr(a.test));
              hash_combine(h, expr(a.subject));
              hash_combine(h, type(a.underlying));
              binders.push_back(a.binder);
              hash_combine(h, expr(a.predicate));
              binders.pop_back();
            },
        },
        e->node);
    return h;
  }
};

}  // namespace

std::size_t alpha_hash(const ExprPtr& e) {
  AlphaHasher h;
  return h.expr(e);
}

std::size_t alpha_hash(const TypePtr& t) {
  AlphaHasher h;
  return h.type(t);
}

std::size_t alpha_hash(const Command& c) {
  if (c.is_blame()) return 0xb1a3eULL;
  return alpha_hash(c.expr());
}

// ---------------------------------------------------------------------------
// Sizes
// ---------------------------------------------------------------------------

std::size_t type_size(const TypePtr& t) {
  return std::visit(
      Overloaded{
          [](const NatType&) -> std::size_t { return 1; },
          [](const BoolType&) -> std::size_t { return 1; },
          [](const ArrowType& a) {
            return 1 + type_size(a.domain) + type_size(a.codomain);
          },
          [](const WedgeType& w) {
            return 1 + type_size(w.left) + type_size(w.right);
          },
          [](const RefineType& r) {
            return 1 + type_size(r.underlying) + expr_size(r.predicate);
          },
      },
      t->node);
}

std::size_t expr_size(const ExprPtr& e) {
  return std::visit(
      Overloaded{
          [](const ZeroExpr&) -> std::size_t { return 1; },
          [](const BoolExpr&) -> std::size_t { return 1; },
          [](const VarExpr&) -> std::size_t { return 1; },
          [](const SuccExpr& s) { return 1 + expr_size(s.arg); },
          [](const PredExpr& s) { return 1 + expr_size(s.arg); },
          [](const IsZeroExpr& s) { return 1 + expr_size(s.arg); },
          [](const IfExpr& i) {
            return 1 + expr_size(i.cond) + expr_size(i.then_branch) +
                   expr_size(i.else_branch);
          },
          [](const AppExpr& a) {
            return 1 + expr_size(a.fn) + expr_size(a.arg);
          },
          [](const AbsExpr& a) {
            return 1 + type_size(a.annotation) + expr_size(a.body);
          },
          [](const FixExpr& f) {
            return 1 + type_size(f.annotation) + expr_size(f.body);
          },
          [](const PairExpr& p) {
            return 1 + expr_size(p.left) + expr_size(p.right);
          },
          [](const ProjExpr& p) { return 1 + expr_size(p.subject); },
          [](const CastExpr& c) {
            return 1 + expr_size(c.subject) + type_size(c.source) +
                   type_size(c.target);
          },
          [](const DelayedExpr& d) {
            return 1 + expr_size(d.subject) + type_size(d.source) +
                   type_size(d.target_dom) + type_size(d.target_cod);
          },
          [](const WaitingExpr& w) {
            return 1 + expr_size(w.subject) + type_size(w.underlying) +
                   expr_size(w.predicate);
          },
          [](const ActiveExpr& a) {
            return 1 + expr_size(a.test) + expr_size(a.subject) +
                   type_size(a.underlying) + expr_size(a.predicate);
          },
      },
      e->node);
}

// ---------------------------------------------------------------------------
// Frames
// ---------------------------------------------------------------------------

ExprPtr plug(const EvalFrame& frame, ExprPtr m) {
  return std::visit(
      Overloaded{
          [&](const SuccHole&) { return succ(std::move(m)); },
          [&](const PredHole&) { return pred(std::move(m)); },
          [&](const IsZeroHole&) { return iszero(std::move(m)); },
          [&](const IfHole& f) {
            return if_expr(std::move(m), f.then_branch, f.else_branch);
          },
          [&](const AppFunHole& f) { return app(std::move(m), f.arg); },
          [&](const AppArgHole& f) { return app(f.fn, std::move(m)); },
          [&](const ProjHole& f) { return proj(f.side, std::move(m)); },
          [&](const CastHole& f) {
            return cast(std::move(m), f.source, f.target);
          },
          [&](const WaitingHole& f) {
            return waiting(std::move(m), f.binder, f.underlying, f.predicate);
          },
      },
      frame);
}

std::optional<std::pair<EvalFrame, ExprPtr>> decompose(const ExprPtr& m) {
  using Out = std::optional<std::pair<EvalFrame, ExprPtr>>;
  return std::visit(
      Overloaded{
          [&](const SuccExpr& s) -> Out {
            if (is_value(s.arg)) return std::nullopt;
            return std::pair{EvalFrame{SuccHole{}}, s.arg};
          },
          [&](const PredExpr& s) -> Out {
            if (is_value(s.arg)) return std::nullopt;
            return std::pair{EvalFrame{PredHole{}}, s.arg};
          },
          [&](const IsZeroExpr& s) -> Out {
            if (is_value(s.arg)) return std::nullopt;
            return std::pair{EvalFrame{IsZeroHole{}}, s.arg};
          },
          [&](const IfExpr& i) -> Out {
            if (is_value(i.cond)) return std::nullopt;
            return std::pair{EvalFrame{IfHole{i.then_branch, i.else_branch}},
                             i.cond};
          },
          [&](const AppExpr& a) -> Out {
            if (!is_value(a.fn)) {
              return std::pair{EvalFrame{AppFunHole{a.arg}}, a.fn};
            }
            if (!is_value(a.arg)) {
              return std::pair{EvalFrame{AppArgHole{a.fn}}, a.arg};
            }
            return std::nullopt;
          },
          [&](const ProjExpr& p) -> Out {
            if (is_value(p.subject)) return std::nullopt;
            return std::pair{EvalFrame{ProjHole{p.side}}, p.subject};
          },
          [&](const CastExpr& c) -> Out {
            if (is_value(c.subject)) return std::nullopt;
            return std::pair{EvalFrame{CastHole{c.source, c.target}},
                             c.subject};
          },
          [&](const WaitingExpr& w) -> Out {
            if (is_value(w.subject)) return std::nullopt;
            return std::pair{
                EvalFrame{WaitingHole{w.binder, w.underlying, w.predicate}},
                w.subject};
          },
          [](const auto&) -> Out { return std::nullopt; },
      },
      m->node);
}

}  // namespace deltah
