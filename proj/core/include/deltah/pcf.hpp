#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>

// The baseline call-by-value PCF: the plain sub-language that essence
// erasure targets, with its own deterministic small-step semantics.
// Deliberately independent of the contract-calculus evaluator so the
// simulation properties compare two separate implementations.

namespace deltah::pcf {

using Name = std::string;

struct Type;
struct Expr;
using TypePtr = std::shared_ptr<const Type>;
using ExprPtr = std::shared_ptr<const Expr>;

struct NatType {};
struct BoolType {};
struct ArrowType {
  TypePtr domain;
  TypePtr codomain;
};

struct Type {
  std::variant<NatType, BoolType, ArrowType> node;
};

TypePtr nat_type();
TypePtr bool_type();
TypePtr arrow(TypePtr domain, TypePtr codomain);
bool is_arrow(const TypePtr& t);
bool type_eq(const TypePtr& a, const TypePtr& b);

struct ZeroExpr {};
struct SuccExpr {
  ExprPtr arg;
};
struct PredExpr {
  ExprPtr arg;
};
struct IsZeroExpr {
  ExprPtr arg;
};
struct BoolExpr {
  bool value;
};
struct IfExpr {
  ExprPtr cond;
  ExprPtr then_branch;
  ExprPtr else_branch;
};
struct VarExpr {
  Name name;
};
struct AppExpr {
  ExprPtr fn;
  ExprPtr arg;
};
struct AbsExpr {
  Name param;
  TypePtr annotation;
  ExprPtr body;
};
// mu f : s1 -> s2 . \x:t. M — annotation must be an arrow, body a lambda.
struct FixExpr {
  Name self;
  TypePtr annotation;
  ExprPtr body;
};

struct Expr {
  std::variant<ZeroExpr, SuccExpr, PredExpr, IsZeroExpr, BoolExpr, IfExpr,
               VarExpr, AppExpr, AbsExpr, FixExpr>
      node;
};

ExprPtr zero();
ExprPtr succ(ExprPtr arg);
ExprPtr pred(ExprPtr arg);
ExprPtr iszero(ExprPtr arg);
ExprPtr boolean(bool value);
ExprPtr if_expr(ExprPtr cond, ExprPtr then_branch, ExprPtr else_branch);
ExprPtr var(Name name);
ExprPtr app(ExprPtr fn, ExprPtr arg);
ExprPtr abs(Name param, TypePtr annotation, ExprPtr body);
// Throws std::invalid_argument unless annotation is an arrow and body a lambda.
ExprPtr fix(Name self, TypePtr annotation, ExprPtr body);

ExprPtr numeral(std::uint64_t n);
std::optional<std::uint64_t> numeral_value(const ExprPtr& e);
bool is_numeral(const ExprPtr& e);
bool is_value(const ExprPtr& e);

std::set<Name> free_vars(const ExprPtr& e);
ExprPtr subst(const ExprPtr& t, const Name& x, const ExprPtr& n);
bool alpha_eq(const ExprPtr& a, const ExprPtr& b);

// The unique successor under the deterministic semantics, or nothing for
// values and stuck terms.
std::optional<ExprPtr> pcf_step(const ExprPtr& m);
// As pcf_step, but also reports the name of the axiom that fired.
std::optional<std::pair<std::string, ExprPtr>> pcf_step_labeled(
    const ExprPtr& m);

struct EvalOutcome {
  enum class Kind { Value, Stuck, FuelExhausted };
  Kind kind;
  ExprPtr term;  // the terminal term, or the frontier when out of fuel
  int steps = 0;
};

EvalOutcome pcf_eval(const ExprPtr& m, int fuel);

}  // namespace deltah::pcf
