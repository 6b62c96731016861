#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "deltah/syntax.hpp"

// The three judgments: context well-formedness, type well-formedness, and
// typing.  Compile-time typing is a decidable syntax-directed algorithm;
// run-time typing is three-valued because its reduction premises are only
// semi-decidable.

namespace deltah {

enum class ErrorKind {
  UnboundVar,
  Mismatch,
  EssenceMismatch,
  NotInterface,
  IllFormedType,
  PredNeedsNonzero,
  RuntimeFormInSource,
  DuplicateBinding,
};

const char* to_string(ErrorKind kind);

struct TypeError {
  ErrorKind kind;
  std::string rule;  // the violated rule, e.g. "T-Pair"
  std::string message;
  std::string location;  // printed offending subterm or type
};

class TypingContext {
 public:
  TypingContext() = default;
  explicit TypingContext(std::vector<std::pair<Name, TypePtr>> bindings)
      : bindings_(std::move(bindings)) {}

  const std::vector<std::pair<Name, TypePtr>>& bindings() const {
    return bindings_;
  }
  bool contains(const Name& x) const;
  // Innermost binding, if any.
  std::optional<TypePtr> lookup(const Name& x) const;
  TypingContext extended(Name x, TypePtr t) const;
  bool empty() const { return bindings_.empty(); }

 private:
  std::vector<std::pair<Name, TypePtr>> bindings_;
};

// The argument type demanded by the predecessor rule:
// {x:nat | if iszero x then false else true}.
TypePtr nonzero_refinement();

// Well-formedness; nullopt means the judgment holds.
std::optional<TypeError> wf_type(const TypePtr& t);
std::optional<TypeError> wf_ctx(const TypingContext& g);

using InferResult = std::variant<TypePtr, TypeError>;
bool inferred(const InferResult& r);
const TypePtr& inferred_type(const InferResult& r);
const TypeError& infer_error(const InferResult& r);

// Syntax-directed compile-time inference.  Rejects run-time forms.
InferResult infer_compile(const TypingContext& g, const ExprPtr& m);

struct TriVerdict {
  enum class Kind { Yes, No, Unknown };
  enum class Reason { Fuel, NondetPremise };

  Kind kind = Kind::Yes;
  std::optional<TypeError> error;   // when No
  std::optional<Reason> reason;     // when Unknown

  static TriVerdict yes() { return {}; }
  static TriVerdict no(TypeError e) {
    return {Kind::No, std::move(e), std::nullopt};
  }
  static TriVerdict unknown(Reason r) {
    return {Kind::Unknown, std::nullopt, r};
  }
  bool is_yes() const { return kind == Kind::Yes; }
  bool is_no() const { return kind == Kind::No; }
  bool is_unknown() const { return kind == Kind::Unknown; }
};

// Checks m against t with the full rule set, including the run-time rules.
// Reduction premises are explored breadth-first over all nondeterministic
// paths under the shared fuel budget; Unknown reports a budget exhaustion
// rather than a refutation.
TriVerdict check_runtime(const TypingContext& g, const ExprPtr& m,
                         const TypePtr& t, int fuel);

}  // namespace deltah
