#include "deltah/gen.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <variant>

#include "deltah/essence.hpp"
#include "deltah/prelude.hpp"
#include "deltah/typecheck.hpp"

namespace deltah {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

std::uint64_t splitmix(std::uint64_t& s) {
  s += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

using Ctx = std::vector<std::pair<Name, TypePtr>>;
using PcfCtx = std::vector<std::pair<Name, pcf::TypePtr>>;

pcf::TypePtr infer_pcf(const PcfCtx& ctx, const pcf::ExprPtr& e) {
  return std::visit(
      Overloaded{
          [&](const pcf::ZeroExpr&) { return pcf::nat_type(); },
          [&](const pcf::SuccExpr&) { return pcf::nat_type(); },
          [&](const pcf::PredExpr&) { return pcf::nat_type(); },
          [&](const pcf::IsZeroExpr&) { return pcf::bool_type(); },
          [&](const pcf::BoolExpr&) { return pcf::bool_type(); },
          [&](const pcf::IfExpr& i) { return infer_pcf(ctx, i.then_branch); },
          [&](const pcf::VarExpr& v) -> pcf::TypePtr {
            for (auto it = ctx.rbegin(); it != ctx.rend(); ++it) {
              if (it->first == v.name) return it->second;
            }
            throw std::logic_error("gen: unbound skeleton variable");
          },
          [&](const pcf::AppExpr& a) -> pcf::TypePtr {
            pcf::TypePtr f = infer_pcf(ctx, a.fn);
            return std::get<pcf::ArrowType>(f->node).codomain;
          },
          [&](const pcf::AbsExpr& a) -> pcf::TypePtr {
            PcfCtx inner = ctx;
            inner.emplace_back(a.param, a.annotation);
            return pcf::arrow(a.annotation, infer_pcf(inner, a.body));
          },
          [&](const pcf::FixExpr& f) { return f.annotation; },
      },
      e->node);
}

}  // namespace

struct GenImpl {
  const GenConfig& cfg;
  std::uint64_t& state;
  int& fresh;

  std::uint64_t next() { return splitmix(state); }
  bool chance(double p) {
    return static_cast<double>(next() >> 11) * 0x1.0p-53 < p;
  }
  std::size_t pick(std::size_t n) { return next() % n; }
  Name fresh_var() { return "v" + std::to_string(fresh++); }

  // -- predicate pool --------------------------------------------------------

  // A boolean expression over the given binder of type u; when u is not the
  // bare base type the binder is cast to it first.
  ExprPtr pred_for(const TypePtr& u, const Name& binder = "x") {
    pcf::TypePtr base = essence_type(u);
    auto binder_at = [&](const TypePtr& b) {
      if (alpha_eq(u, b)) return var(binder);
      return cast(var(binder), u, b);
    };
    if (std::holds_alternative<pcf::NatType>(base->node)) {
      int n = std::clamp(cfg.predicate_pool, 1, 5);
      switch (pick(static_cast<std::size_t>(n))) {
        case 0: return true_expr();
        case 1: return iszero(binder_at(nat_type()));
        case 2:
          return if_expr(iszero(binder_at(nat_type())), false_expr(),
                         true_expr());
        case 3: return app(*prelude().lookup("evenp"), binder_at(nat_type()));
        default: return app(*prelude().lookup("oddp"), binder_at(nat_type()));
      }
    }
    if (std::holds_alternative<pcf::BoolType>(base->node)) {
      switch (pick(3)) {
        case 0: return true_expr();
        case 1: return binder_at(bool_type());
        default:
          return if_expr(binder_at(bool_type()), true_expr(), false_expr());
      }
    }
    return true_expr();
  }

  // -- types -----------------------------------------------------------------

  pcf::TypePtr gen_pcf_type(int depth) {
    if (depth > 0 && chance(0.35)) {
      return pcf::arrow(gen_pcf_type(depth - 1), gen_pcf_type(depth - 1));
    }
    return chance(0.65) ? pcf::nat_type() : pcf::bool_type();
  }

  // A well-formed type whose essence is pt.
  TypePtr decorate(const pcf::TypePtr& pt, int depth) {
    if (depth > 0 && chance(cfg.wedge_prob)) {
      return wedge(decorate(pt, depth - 1), decorate(pt, depth - 1));
    }
    TypePtr t = std::visit(
        Overloaded{
            [&](const pcf::NatType&) { return nat_type(); },
            [&](const pcf::BoolType&) { return bool_type(); },
            [&](const pcf::ArrowType& a) {
              return arrow(decorate(a.domain, depth - 1),
                           decorate(a.codomain, depth - 1));
            },
        },
        pt->node);
    if (depth > 0 && chance(0.45)) t = refine("x", t, pred_for(t, "x"));
    if (depth > 1 && chance(0.15)) t = refine("y", t, pred_for(t, "y"));
    return t;
  }

  // -- skeletons ---------------------------------------------------------------

  std::vector<Name> vars_of(const PcfCtx& ctx, const pcf::TypePtr& goal) {
    std::vector<Name> out;
    for (const auto& [n, t] : ctx) {
      if (pcf::type_eq(t, goal)) out.push_back(n);
    }
    return out;
  }

  pcf::ExprPtr leaf(const PcfCtx& ctx, const pcf::TypePtr& goal) {
    std::vector<Name> vs = vars_of(ctx, goal);
    if (!vs.empty() && chance(0.5)) return pcf::var(vs[pick(vs.size())]);
    return std::visit(
        Overloaded{
            [&](const pcf::NatType&) {
              return pcf::numeral(
                  pick(static_cast<std::size_t>(cfg.max_numeral) + 1));
            },
            [&](const pcf::BoolType&) { return pcf::boolean(chance(0.5)); },
            [&](const pcf::ArrowType& a) {
              Name x = fresh_var();
              PcfCtx inner = ctx;
              inner.emplace_back(x, a.domain);
              return pcf::abs(x, a.domain, leaf(inner, a.codomain));
            },
        },
        goal->node);
  }

  pcf::ExprPtr gen_pcf(const PcfCtx& ctx, const pcf::TypePtr& goal,
                       int depth) {
    if (depth <= 0) return leaf(ctx, goal);
    auto sub = [&](const pcf::TypePtr& g) {
      return gen_pcf(ctx, g, depth - 1);
    };
    auto gen_app = [&] {
      pcf::TypePtr s = gen_pcf_type(1);
      return pcf::app(gen_pcf(ctx, pcf::arrow(s, goal), depth - 1),
                      gen_pcf(ctx, s, depth - 1));
    };
    auto gen_if = [&] {
      return pcf::if_expr(sub(pcf::bool_type()), sub(goal), sub(goal));
    };
    return std::visit(
        Overloaded{
            [&](const pcf::NatType&) {
              switch (pick(8)) {
                case 0:
                case 1: return leaf(ctx, goal);
                case 2:
                case 3: return pcf::succ(sub(pcf::nat_type()));
                case 4: return pcf::pred(sub(pcf::nat_type()));
                case 5: return gen_if();
                case 6: return gen_app();
                default: return leaf(ctx, goal);
              }
            },
            [&](const pcf::BoolType&) {
              switch (pick(6)) {
                case 0:
                case 1: return leaf(ctx, goal);
                case 2:
                case 3: return pcf::iszero(sub(pcf::nat_type()));
                case 4: return gen_if();
                default: return gen_app();
              }
            },
            [&](const pcf::ArrowType& a) {
              switch (pick(8)) {
                case 0: return leaf(ctx, goal);
                case 1: {
                  // Recursive function; may diverge, the fuel handles it.
                  Name f = fresh_var();
                  Name x = fresh_var();
                  PcfCtx inner = ctx;
                  inner.emplace_back(f, goal);
                  inner.emplace_back(x, a.domain);
                  return pcf::fix(
                      f, goal,
                      pcf::abs(x, a.domain,
                               gen_pcf(inner, a.codomain, depth - 1)));
                }
                case 2: return gen_if();
                case 3: return gen_app();
                default: {
                  Name x = fresh_var();
                  PcfCtx inner = ctx;
                  inner.emplace_back(x, a.domain);
                  return pcf::abs(x, a.domain,
                                  gen_pcf(inner, a.codomain, depth - 1));
                }
              }
            },
        },
        goal->node);
  }

  // -- reconstruction ----------------------------------------------------------

  static PcfCtx essences(const Ctx& ctx) {
    PcfCtx out;
    for (const auto& [n, t] : ctx) out.emplace_back(n, essence_type(t));
    return out;
  }

  // Produces a term accepted at `goal` whose essence is `skel`.
  ExprPtr reconstruct(const pcf::ExprPtr& skel, const Ctx& ctx,
                      const TypePtr& goal, int casts_left) {
    if (casts_left > 0 && chance(cfg.cast_prob)) {
      TypePtr via = decorate(essence_type(goal), 1);
      return cast(reconstruct(skel, ctx, via, casts_left - 1), via, goal);
    }
    if (const auto* r = std::get_if<RefineType>(&goal->node)) {
      return cast(reconstruct(skel, ctx, r->underlying, casts_left),
                  r->underlying, goal);
    }
    if (const auto* w = std::get_if<WedgeType>(&goal->node)) {
      // One skeleton, two decorations: the strong-pair side condition holds
      // by construction.
      return pair(reconstruct(skel, ctx, w->left, casts_left),
                  reconstruct(skel, ctx, w->right, casts_left));
    }
    return std::visit(
        Overloaded{
            [&](const pcf::ZeroExpr&) { return zero(); },
            [&](const pcf::SuccExpr& s) {
              return succ(reconstruct(s.arg, ctx, nat_type(), casts_left));
            },
            [&](const pcf::PredExpr& s) {
              // The predecessor rule wants the nonzero refinement; guard the
              // argument with a cast.
              return pred(
                  cast(reconstruct(s.arg, ctx, nat_type(), casts_left),
                       nat_type(), nonzero_refinement()));
            },
            [&](const pcf::IsZeroExpr& s) {
              return iszero(reconstruct(s.arg, ctx, nat_type(), casts_left));
            },
            [&](const pcf::BoolExpr& b) { return boolean(b.value); },
            [&](const pcf::IfExpr& i) {
              return if_expr(
                  reconstruct(i.cond, ctx, bool_type(), casts_left),
                  reconstruct(i.then_branch, ctx, goal, casts_left),
                  reconstruct(i.else_branch, ctx, goal, casts_left));
            },
            [&](const pcf::VarExpr& v) -> ExprPtr {
              for (auto it = ctx.rbegin(); it != ctx.rend(); ++it) {
                if (it->first == v.name) {
                  if (alpha_eq(it->second, goal)) return var(v.name);
                  return cast(var(v.name), it->second, goal);
                }
              }
              throw std::logic_error("gen: unbound variable in reconstruct");
            },
            [&](const pcf::AppExpr& a) {
              pcf::TypePtr s = infer_pcf(essences(ctx), a.arg);
              TypePtr d = chance(0.4) ? decorate(s, 1) : embed_type(s);
              return app(reconstruct(a.fn, ctx, arrow(d, goal), casts_left),
                         reconstruct(a.arg, ctx, d, casts_left));
            },
            [&](const pcf::AbsExpr& a) -> ExprPtr {
              const auto& ar = std::get<ArrowType>(goal->node);
              Ctx inner = ctx;
              inner.emplace_back(a.param, ar.domain);
              return abs(a.param, ar.domain,
                         reconstruct(a.body, inner, ar.codomain, casts_left));
            },
            [&](const pcf::FixExpr& f) -> ExprPtr {
              const auto& ar = std::get<ArrowType>(goal->node);
              const auto& body = std::get<pcf::AbsExpr>(f.body->node);
              Ctx inner = ctx;
              inner.emplace_back(f.self, goal);
              inner.emplace_back(body.param, ar.domain);
              return fix(f.self, goal,
                         abs(body.param, ar.domain,
                             reconstruct(body.body, inner, ar.codomain,
                                         casts_left)));
            },
        },
        skel->node);
  }
};

Generator::Generator(const GenConfig& cfg) : cfg_(cfg), state_(cfg.seed) {}

TypePtr Generator::gen_type() {
  GenImpl g{cfg_, state_, fresh_counter_};
  return g.decorate(g.gen_pcf_type(cfg_.max_depth), cfg_.max_depth);
}

TypePtr Generator::gen_refinement_type() {
  GenImpl g{cfg_, state_, fresh_counter_};
  TypePtr u = g.decorate(pcf::nat_type(), 1);
  ExprPtr p = g.pred_for(u);
  // Skew away from the trivial predicate so the inversion properties bite.
  if (alpha_eq(p, true_expr())) {
    p = iszero(alpha_eq(u, nat_type()) ? var("x")
                                       : cast(var("x"), u, nat_type()));
  }
  return refine("x", u, p);
}

TypePtr Generator::gen_wedge_of_refinements() {
  GenImpl g{cfg_, state_, fresh_counter_};
  TypePtr l = refine("x", nat_type(), g.pred_for(nat_type()));
  TypePtr r = refine("x", nat_type(), g.pred_for(nat_type()));
  return wedge(l, r);
}

TypePtr Generator::gen_wedge_type() {
  GenImpl g{cfg_, state_, fresh_counter_};
  pcf::TypePtr pt = g.gen_pcf_type(cfg_.max_depth - 1);
  return wedge(g.decorate(pt, cfg_.max_depth - 1),
               g.decorate(pt, cfg_.max_depth - 1));
}

Generated Generator::gen_well_typed() {
  for (int attempt = 0; attempt < 100; ++attempt) {
    TypePtr goal = gen_type();
    Generated out = gen_well_typed(goal);
    if (expr_size(out.term) <= 4000) return out;
  }
  throw std::runtime_error("gen_well_typed: retry budget exhausted");
}

Generated Generator::gen_well_typed(const TypePtr& goal) {
  return gen_under({}, goal);
}

Generated Generator::gen_under(
    const std::vector<std::pair<Name, TypePtr>>& ctx, const TypePtr& goal) {
  GenImpl g{cfg_, state_, fresh_counter_};
  pcf::ExprPtr skel =
      g.gen_pcf(GenImpl::essences(ctx), essence_type(goal), cfg_.max_depth);
  ExprPtr term = g.reconstruct(skel, ctx, goal, 4);
  return Generated{term, goal};
}

pcf::ExprPtr Generator::gen_pcf_term() {
  GenImpl g{cfg_, state_, fresh_counter_};
  pcf::TypePtr t = g.gen_pcf_type(3);
  return g.gen_pcf({}, t, cfg_.max_depth);
}

}  // namespace deltah
