#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

// Abstract syntax for the contract calculus: types (including refinement
// intersections), expressions (including the three run-time checking forms),
// commands, evaluation frames, and the binding metaoperations (free
// variables, capture-avoiding substitution, alpha equivalence).
//
// All nodes are immutable and shared; every operation in this header is pure.

namespace deltah {

using Name = std::string;

struct Type;
struct Expr;
using TypePtr = std::shared_ptr<const Type>;
using ExprPtr = std::shared_ptr<const Expr>;

// ---------------------------------------------------------------------------
// Types:  T ::= nat | bool | T -> T | T /\ T | {x:T | e}
// ---------------------------------------------------------------------------

struct NatType {};
struct BoolType {};
struct ArrowType {
  TypePtr domain;
  TypePtr codomain;
};
struct WedgeType {
  TypePtr left;
  TypePtr right;
};
// The binder is binding in the predicate only; types bind nothing else.
struct RefineType {
  Name binder;
  TypePtr underlying;
  ExprPtr predicate;
};

struct Type {
  std::variant<NatType, BoolType, ArrowType, WedgeType, RefineType> node;
};

TypePtr nat_type();
TypePtr bool_type();
TypePtr arrow(TypePtr domain, TypePtr codomain);
TypePtr wedge(TypePtr left, TypePtr right);
TypePtr refine(Name binder, TypePtr underlying, ExprPtr predicate);

bool is_arrow(const TypePtr& t);
bool is_wedge(const TypePtr& t);
bool is_refine(const TypePtr& t);
// Interface types:  I ::= T -> T | I /\ I  (annotations of recursive functions)
bool is_interface_type(const TypePtr& t);

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

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
// Recursive function.  The body must be a recursion body (a lambda or a
// nested pair of recursion bodies); enforced at construction.
struct FixExpr {
  Name self;
  TypePtr annotation;
  ExprPtr body;
};
// Strong pair and its projections.
struct PairExpr {
  ExprPtr left;
  ExprPtr right;
};
struct ProjExpr {
  int side;  // 1 or 2
  ExprPtr subject;
};
struct CastExpr {
  ExprPtr subject;
  TypePtr source;
  TypePtr target;
};

// Run-time forms.  These never appear in source programs.

// Delayed function cast <| V : S => D -> C |>.  Subject must be a value.
struct DelayedExpr {
  ExprPtr subject;
  TypePtr source;
  TypePtr target_dom;
  TypePtr target_cod;
};
// Waiting check <| e ? {x:T | p} |>; the binder binds in the predicate.
struct WaitingExpr {
  ExprPtr subject;
  Name binder;
  TypePtr underlying;
  ExprPtr predicate;
};
// Active check <| test => V : {x:T | p} |>.  Subject must be a value.
struct ActiveExpr {
  ExprPtr test;
  ExprPtr subject;
  Name binder;
  TypePtr underlying;
  ExprPtr predicate;
};

struct Expr {
  std::variant<ZeroExpr, SuccExpr, PredExpr, IsZeroExpr, BoolExpr, IfExpr,
               VarExpr, AppExpr, AbsExpr, FixExpr, PairExpr, ProjExpr,
               CastExpr, DelayedExpr, WaitingExpr, ActiveExpr>
      node;
};

ExprPtr zero();
ExprPtr succ(ExprPtr arg);
ExprPtr pred(ExprPtr arg);
ExprPtr iszero(ExprPtr arg);
ExprPtr boolean(bool value);
ExprPtr true_expr();
ExprPtr false_expr();
ExprPtr if_expr(ExprPtr cond, ExprPtr then_branch, ExprPtr else_branch);
ExprPtr var(Name name);
ExprPtr app(ExprPtr fn, ExprPtr arg);
ExprPtr abs(Name param, TypePtr annotation, ExprPtr body);
// Throws std::invalid_argument if body is not a recursion body.
ExprPtr fix(Name self, TypePtr annotation, ExprPtr body);
ExprPtr pair(ExprPtr left, ExprPtr right);
ExprPtr proj(int side, ExprPtr subject);
ExprPtr cast(ExprPtr subject, TypePtr source, TypePtr target);
// Throws std::invalid_argument if subject is not a value.
ExprPtr delayed(ExprPtr subject, TypePtr source, TypePtr target_dom,
                TypePtr target_cod);
ExprPtr waiting(ExprPtr subject, Name binder, TypePtr underlying,
                ExprPtr predicate);
// Throws std::invalid_argument if subject is not a value.
ExprPtr active(ExprPtr test, ExprPtr subject, Name binder, TypePtr underlying,
               ExprPtr predicate);

// Builds the numeral succ^n(0); numeral_value inverts it.
ExprPtr numeral(std::uint64_t n);
std::optional<std::uint64_t> numeral_value(const ExprPtr& e);

// ---------------------------------------------------------------------------
// Commands:  C ::= M | blame
// ---------------------------------------------------------------------------

class Command {
 public:
  static Command blame() { return Command(nullptr); }
  static Command term(ExprPtr e) { return Command(std::move(e)); }
  bool is_blame() const { return term_ == nullptr; }
  // Precondition: !is_blame().
  const ExprPtr& expr() const { return term_; }

 private:
  explicit Command(ExprPtr e) : term_(std::move(e)) {}
  ExprPtr term_;
};

// ---------------------------------------------------------------------------
// Syntactic classifiers
// ---------------------------------------------------------------------------

bool is_numeral(const ExprPtr& e);
bool is_value(const ExprPtr& e);
bool is_recursion_body(const ExprPtr& e);
// True when the root node is a delayed/waiting/active check.
bool is_runtime_form(const ExprPtr& e);
// True when any subterm (or any type annotation's predicate) contains a
// run-time form; used to reject run-time forms in source programs.
bool contains_runtime_form(const ExprPtr& e);
bool contains_runtime_form(const TypePtr& t);

enum class SyntaxClass { Value, RecursionBody, RuntimeForm, Plain };
SyntaxClass classify(const ExprPtr& e);

// ---------------------------------------------------------------------------
// Binding metaoperations (mutually recursive over expressions and types)
// ---------------------------------------------------------------------------

std::set<Name> free_vars(const ExprPtr& e);
std::set<Name> free_vars(const TypePtr& t);

// Returns a name based on `base` not occurring in `avoid`.
Name fresh_name(const Name& base, const std::set<Name>& avoid);

ExprPtr subst(const ExprPtr& t, const Name& x, const ExprPtr& n);
TypePtr subst(const TypePtr& t, const Name& x, const ExprPtr& n);

bool alpha_eq(const ExprPtr& a, const ExprPtr& b);
bool alpha_eq(const TypePtr& a, const TypePtr& b);
bool alpha_eq(const Command& a, const Command& b);

// Hash invariant under alpha equivalence (bound variables hash by binder
// distance); suitable for deduplicating explored states.
std::size_t alpha_hash(const ExprPtr& e);
std::size_t alpha_hash(const TypePtr& t);
std::size_t alpha_hash(const Command& c);

struct CommandAlphaHash {
  std::size_t operator()(const Command& c) const { return alpha_hash(c); }
};
struct CommandAlphaEq {
  bool operator()(const Command& a, const Command& b) const {
    return alpha_eq(a, b);
  }
};

// Number of expression/type nodes; used by the shrinker.
std::size_t expr_size(const ExprPtr& e);
std::size_t type_size(const TypePtr& t);

// ---------------------------------------------------------------------------
// Evaluation frames:
//   E ::= succ [] | pred [] | iszero [] | if [] then M else N | [] M | V []
//       | proj1 [] | proj2 [] | ([] : S => T) | <| [] ? {x:T | p} |>
// ---------------------------------------------------------------------------

struct SuccHole {};
struct PredHole {};
struct IsZeroHole {};
struct IfHole {
  ExprPtr then_branch;
  ExprPtr else_branch;
};
struct AppFunHole {
  ExprPtr arg;
};
struct AppArgHole {
  ExprPtr fn;  // must be a value
};
struct ProjHole {
  int side;
};
struct CastHole {
  TypePtr source;
  TypePtr target;
};
struct WaitingHole {
  Name binder;
  TypePtr underlying;
  ExprPtr predicate;
};

using EvalFrame =
    std::variant<SuccHole, PredHole, IsZeroHole, IfHole, AppFunHole,
                 AppArgHole, ProjHole, CastHole, WaitingHole>;

ExprPtr plug(const EvalFrame& frame, ExprPtr m);

// Named type spellings (used by both the parser and the printer).
using TypeAbbrevs = std::vector<std::pair<Name, TypePtr>>;

// Peels the unique outermost frame whose hole holds a non-value.  Returns
// nothing for values, root redexes, and pair/active forms (those are
// evaluated by their own contextual rules, never through frames).
std::optional<std::pair<EvalFrame, ExprPtr>> decompose(const ExprPtr& m);

}  // namespace deltah
