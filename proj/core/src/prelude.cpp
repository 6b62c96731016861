#include "deltah/prelude.hpp"

#include <stdexcept>
#include <utility>

#include "deltah/essence.hpp"
#include "deltah/parser.hpp"
#include "deltah/printer.hpp"
#include "deltah/typecheck.hpp"

namespace deltah {

namespace {

struct RawDef {
  const char* name;
  const char* source;
};

constexpr const char* kNonzeroSource =
    "{x:nat | if iszero x then false else true}";

constexpr RawDef kDefs[] = {
    {"add",
     "mu add:nat->nat->nat. fun m:nat. fun n:nat. "
     "if iszero m then n else succ (add (pred (m : nat => nonzero)) n)"},
    {"sub",
     "mu sub:nat->nat->nat. fun m:nat. fun n:nat. "
     "if iszero n then m else if iszero m then 0 "
     "else sub (pred (m : nat => nonzero)) (pred (n : nat => nonzero))"},
    {"gt",
     "mu gt:nat->nat->bool. fun m:nat. fun n:nat. "
     "if iszero m then false else if iszero n then true "
     "else gt (pred (m : nat => nonzero)) (pred (n : nat => nonzero))"},
    {"eq",
     "mu eq:nat->nat->bool. fun m:nat. fun n:nat. "
     "if iszero m then iszero n else if iszero n then false "
     "else eq (pred (m : nat => nonzero)) (pred (n : nat => nonzero))"},
    {"mod",
     "mu mod:nat->nat->nat. fun m:nat. fun n:nat. "
     "if gt n m then m else mod (sub m n) n"},
    {"evenp",
     "mu evenp:nat->bool. fun x:nat. "
     "if iszero x then true "
     "else if iszero (pred (x : nat => nonzero)) then false "
     "else evenp (pred ((pred (x : nat => nonzero)) : nat => nonzero))"},
    {"oddp",
     "fun x:nat. "
     "if iszero x then false else evenp (pred (x : nat => nonzero))"},
};

Prelude build() {
  Prelude p;
  ParseOptions opts;
  opts.abbrevs = &p.type_abbrevs;

  p.type_abbrevs.emplace_back("nonzero", parse_type(kNonzeroSource, opts));

  for (const RawDef& raw : kDefs) {
    ExprPtr term = parse_expr(raw.source, opts);
    for (const PreludeDef& earlier : p.defs) {
      term = subst(term, earlier.name, earlier.term);
    }
    p.defs.push_back(PreludeDef{raw.name, raw.source, term});
  }

  // Parity types; their predicates close over evenp/oddp.
  for (const char* name : {"even", "odd"}) {
    std::string src = std::string("{x:nat | ") +
                      (name[0] == 'e' ? "evenp" : "oddp") + " x}";
    TypePtr t = parse_type(src, opts);
    if (const auto* r = std::get_if<RefineType>(&t->node)) {
      ExprPtr pred = r->predicate;
      for (const PreludeDef& def : p.defs) {
        pred = subst(pred, def.name, def.term);
      }
      t = refine(r->binder, r->underlying, pred);
    }
    p.type_abbrevs.emplace_back(name, t);
  }
  return p;
}

}  // namespace

const ExprPtr* Prelude::lookup(const Name& name) const {
  for (const PreludeDef& def : defs) {
    if (def.name == name) return &def.term;
  }
  return nullptr;
}

const Prelude& prelude() {
  static const Prelude p = build();
  return p;
}

ExprPtr resolve(const ExprPtr& e, const Prelude& p) {
  ExprPtr out = e;
  for (const PreludeDef& def : p.defs) {
    out = subst(out, def.name, def.term);
  }
  return out;
}

Command resolve(const Command& c, const Prelude& p) {
  if (c.is_blame()) return c;
  return Command::term(resolve(c.expr(), p));
}

ExprPtr resolve_for_pcf(const ExprPtr& e, const Prelude& p) {
  ExprPtr out = e;
  for (const PreludeDef& def : p.defs) {
    out = subst(out, def.name, embed(essence_expr(def.term)));
  }
  return out;
}

std::optional<std::string> verify_prelude(const Prelude& p) {
  for (const auto& [name, t] : p.type_abbrevs) {
    if (auto e = wf_type(t)) {
      return "prelude type '" + name + "' is ill-formed [" + e->rule + "] " +
             e->message;
    }
  }
  for (const PreludeDef& def : p.defs) {
    InferResult r = infer_compile(TypingContext{}, def.term);
    if (!inferred(r)) {
      const TypeError& e = infer_error(r);
      return "prelude definition '" + def.name + "' does not typecheck [" +
             e.rule + "] " + e.message;
    }
  }
  return std::nullopt;
}

}  // namespace deltah
