#include "deltah/essence.hpp"

#include <variant>

namespace deltah {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

}  // namespace

pcf::TypePtr essence_type(const TypePtr& t) {
  return std::visit(
      Overloaded{
          [](const NatType&) { return pcf::nat_type(); },
          [](const BoolType&) { return pcf::bool_type(); },
          [](const ArrowType& a) {
            return pcf::arrow(essence_type(a.domain), essence_type(a.codomain));
          },
          // A wedge erases to its left component; a refinement to its
          // underlying type.
          [](const WedgeType& w) { return essence_type(w.left); },
          [](const RefineType& r) { return essence_type(r.underlying); },
      },
      t->node);
}

pcf::ExprPtr essence_expr(const ExprPtr& e) {
  return std::visit(
      Overloaded{
          [](const ZeroExpr&) { return pcf::zero(); },
          [](const SuccExpr& s) { return pcf::succ(essence_expr(s.arg)); },
          [](const PredExpr& s) { return pcf::pred(essence_expr(s.arg)); },
          [](const IsZeroExpr& s) { return pcf::iszero(essence_expr(s.arg)); },
          [](const BoolExpr& b) { return pcf::boolean(b.value); },
          [](const IfExpr& i) {
            return pcf::if_expr(essence_expr(i.cond),
                                essence_expr(i.then_branch),
                                essence_expr(i.else_branch));
          },
          [](const VarExpr& v) { return pcf::var(v.name); },
          [](const AppExpr& a) {
            return pcf::app(essence_expr(a.fn), essence_expr(a.arg));
          },
          [](const AbsExpr& a) {
            return pcf::abs(a.param, essence_type(a.annotation),
                            essence_expr(a.body));
          },
          [](const FixExpr& f) {
            return pcf::fix(f.self, essence_type(f.annotation),
                            essence_expr(f.body));
          },
          [](const PairExpr& p) { return essence_expr(p.left); },
          [](const ProjExpr& p) { return essence_expr(p.subject); },
          [](const CastExpr& c) { return essence_expr(c.subject); },
          [](const DelayedExpr& d) { return essence_expr(d.subject); },
          [](const WaitingExpr& w) { return essence_expr(w.subject); },
          // The value under test is the subject of an active check.
          [](const ActiveExpr& a) { return essence_expr(a.subject); },
      },
      e->node);
}

TypePtr embed_type(const pcf::TypePtr& t) {
  return std::visit(
      Overloaded{
          [](const pcf::NatType&) { return nat_type(); },
          [](const pcf::BoolType&) { return bool_type(); },
          [](const pcf::ArrowType& a) {
            return arrow(embed_type(a.domain), embed_type(a.codomain));
          },
      },
      t->node);
}

ExprPtr embed(const pcf::ExprPtr& e) {
  return std::visit(
      Overloaded{
          [](const pcf::ZeroExpr&) { return zero(); },
          [](const pcf::SuccExpr& s) { return succ(embed(s.arg)); },
          [](const pcf::PredExpr& s) { return pred(embed(s.arg)); },
          [](const pcf::IsZeroExpr& s) { return iszero(embed(s.arg)); },
          [](const pcf::BoolExpr& b) { return boolean(b.value); },
          [](const pcf::IfExpr& i) {
            return if_expr(embed(i.cond), embed(i.then_branch),
                           embed(i.else_branch));
          },
          [](const pcf::VarExpr& v) { return var(v.name); },
          [](const pcf::AppExpr& a) { return app(embed(a.fn), embed(a.arg)); },
          [](const pcf::AbsExpr& a) {
            return abs(a.param, embed_type(a.annotation), embed(a.body));
          },
          [](const pcf::FixExpr& f) {
            return fix(f.self, embed_type(f.annotation), embed(f.body));
          },
      },
      e->node);
}

std::optional<pcf::TypePtr> to_pcf_type(const TypePtr& t) {
  using Out = std::optional<pcf::TypePtr>;
  return std::visit(
      Overloaded{
          [](const NatType&) -> Out { return pcf::nat_type(); },
          [](const BoolType&) -> Out { return pcf::bool_type(); },
          [](const ArrowType& a) -> Out {
            auto d = to_pcf_type(a.domain);
            auto c = to_pcf_type(a.codomain);
            if (!d || !c) return std::nullopt;
            return pcf::arrow(*d, *c);
          },
          [](const auto&) -> Out { return std::nullopt; },
      },
      t->node);
}

std::optional<pcf::ExprPtr> to_pcf(const ExprPtr& e) {
  using Out = std::optional<pcf::ExprPtr>;
  auto both = [](auto a, auto b,
                 auto mk) -> Out {
    if (!a || !b) return std::nullopt;
    return mk(*a, *b);
  };
  return std::visit(
      Overloaded{
          [](const ZeroExpr&) -> Out { return pcf::zero(); },
          [](const SuccExpr& s) -> Out {
            auto a = to_pcf(s.arg);
            if (!a) return std::nullopt;
            return pcf::succ(*a);
          },
          [](const PredExpr& s) -> Out {
            auto a = to_pcf(s.arg);
            if (!a) return std::nullopt;
            return pcf::pred(*a);
          },
          [](const IsZeroExpr& s) -> Out {
            auto a = to_pcf(s.arg);
            if (!a) return std::nullopt;
            return pcf::iszero(*a);
          },
          [](const BoolExpr& b) -> Out { return pcf::boolean(b.value); },
          [](const IfExpr& i) -> Out {
            auto c = to_pcf(i.cond);
            auto t = to_pcf(i.then_branch);
            auto f = to_pcf(i.else_branch);
            if (!c || !t || !f) return std::nullopt;
            return pcf::if_expr(*c, *t, *f);
          },
          [](const VarExpr& v) -> Out { return pcf::var(v.name); },
          [&](const AppExpr& a) -> Out {
            return both(to_pcf(a.fn), to_pcf(a.arg),
                        [](auto f, auto x) { return pcf::app(f, x); });
          },
          [](const AbsExpr& a) -> Out {
            auto t = to_pcf_type(a.annotation);
            auto b = to_pcf(a.body);
            if (!t || !b) return std::nullopt;
            return pcf::abs(a.param, *t, *b);
          },
          [](const FixExpr& f) -> Out {
            auto t = to_pcf_type(f.annotation);
            auto b = to_pcf(f.body);
            if (!t || !b) return std::nullopt;
            if (!pcf::is_arrow(*t)) return std::nullopt;
            if (!std::holds_alternative<pcf::AbsExpr>((*b)->node)) {
              return std::nullopt;
            }
            return pcf::fix(f.self, *t, *b);
          },
          [](const auto&) -> Out { return std::nullopt; },
      },
      e->node);
}

}  // namespace deltah
