#include "deltah/printer.hpp"

#include <sstream>
#include <variant>

namespace deltah {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

// Type precedence: 0 arrow (right-assoc), 1 wedge (left-assoc), 2 atom.
// Expr precedence: 0 open (fun/mu/if), 1 application, 2 prefix, 3 atom.

struct Printer {
  const PrintOptions& opts;
  std::ostringstream out;

  void type(const TypePtr& t, int prec) {
    if (opts.abbrevs) {
      for (const auto& [name, ty] : *opts.abbrevs) {
        if (alpha_eq(t, ty)) {
          out << name;
          return;
        }
      }
    }
    std::visit(
        Overloaded{
            [&](const NatType&) { out << "nat"; },
            [&](const BoolType&) { out << "bool"; },
            [&](const ArrowType& a) {
              bool paren = prec > 0;
              if (paren) out << '(';
              type(a.domain, 1);
              out << " -> ";
              type(a.codomain, 0);
              if (paren) out << ')';
            },
            [&](const WedgeType& w) {
              bool paren = prec > 1;
              if (paren) out << '(';
              type(w.left, 1);
              out << " /\\ ";
              type(w.right, 2);
              if (paren) out << ')';
            },
            [&](const RefineType& r) {
              out << '{' << r.binder << ':';
              type(r.underlying, 0);
              out << " | ";
              expr(r.predicate, 0);
              out << '}';
            },
        },
        t->node);
  }

  void refinement(const Name& binder, const TypePtr& underlying,
                  const ExprPtr& predicate) {
    TypePtr r = refine(binder, underlying, predicate);
    type(r, 2);
  }

  void prefix(const char* kw, const ExprPtr& arg, int prec) {
    bool paren = prec > 2;
    if (paren) out << '(';
    out << kw << ' ';
    expr(arg, 2);
    if (paren) out << ')';
  }

  void expr(const ExprPtr& e, int prec) {
    if (opts.numerals) {
      if (auto n = numeral_value(e)) {
        out << *n;
        return;
      }
    }
    std::visit(
        Overloaded{
            [&](const ZeroExpr&) { out << '0'; },
            [&](const SuccExpr& s) { prefix("succ", s.arg, prec); },
            [&](const PredExpr& s) { prefix("pred", s.arg, prec); },
            [&](const IsZeroExpr& s) { prefix("iszero", s.arg, prec); },
            [&](const BoolExpr& b) { out << (b.value ? "true" : "false"); },
            [&](const IfExpr& i) {
              bool paren = prec > 0;
              if (paren) out << '(';
              out << "if ";
              expr(i.cond, 0);
              out << " then ";
              expr(i.then_branch, 0);
              out << " else ";
              expr(i.else_branch, 0);
              if (paren) out << ')';
            },
            [&](const VarExpr& v) { out << v.name; },
            [&](const AppExpr& a) {
              bool paren = prec > 1;
              if (paren) out << '(';
              expr(a.fn, 1);
              out << ' ';
              expr(a.arg, 2);
              if (paren) out << ')';
            },
            [&](const AbsExpr& a) {
              bool paren = prec > 0;
              if (paren) out << '(';
              out << "fun " << a.param << ':';
              type(a.annotation, 0);
              out << ". ";
              expr(a.body, 0);
              if (paren) out << ')';
            },
            [&](const FixExpr& f) {
              bool paren = prec > 0;
              if (paren) out << '(';
              out << "mu " << f.self << ':';
              type(f.annotation, 0);
              out << ". ";
              expr(f.body, 0);
              if (paren) out << ')';
            },
            [&](const PairExpr& p) {
              out << '<';
              expr(p.left, 0);
              out << ", ";
              expr(p.right, 0);
              out << '>';
            },
            [&](const ProjExpr& p) {
              prefix(p.side == 1 ? "proj1" : "proj2", p.subject, prec);
            },
            [&](const CastExpr& c) {
              out << '(';
              expr(c.subject, 0);
              out << " : ";
              type(c.source, 0);
              out << " => ";
              type(c.target, 0);
              out << ')';
            },
            [&](const DelayedExpr& d) {
              out << "<| ";
              expr(d.subject, 0);
              out << " : ";
              type(d.source, 0);
              out << " => ";
              type(arrow(d.target_dom, d.target_cod), 0);
              out << " |>";
            },
            [&](const WaitingExpr& w) {
              out << "<| ";
              expr(w.subject, 0);
              out << " ? ";
              refinement(w.binder, w.underlying, w.predicate);
              out << " |>";
            },
            [&](const ActiveExpr& a) {
              out << "<| ";
              expr(a.test, 0);
              out << " => ";
              expr(a.subject, 1);
              out << " : ";
              refinement(a.binder, a.underlying, a.predicate);
              out << " |>";
            },
        },
        e->node);
  }
};

}  // namespace

std::string print(const TypePtr& t, const PrintOptions& opts) {
  Printer p{opts};
  p.type(t, 0);
  return p.out.str();
}

std::string print(const ExprPtr& e, const PrintOptions& opts) {
  Printer p{opts};
  p.expr(e, 0);
  return p.out.str();
}

std::string print(const Command& c, const PrintOptions& opts) {
  if (c.is_blame()) return "blame";
  return print(c.expr(), opts);
}

}  // namespace deltah
