#pragma once

#include <optional>
#include <string>
#include <vector>

#include "deltah/syntax.hpp"

// The arithmetic prelude: recursive core-language functions (add, sub, gt,
// eq, mod, evenp, oddp) plus the named type spellings nonzero, even, odd.
// Definitions are ordinary source text; loading closes each definition over
// the earlier ones, so every prelude term is closed.  Every pred inside is
// guarded by a cast to the nonzero refinement, which is what the
// predecessor rule demands.

namespace deltah {

struct PreludeDef {
  Name name;
  std::string source;  // original spelling
  ExprPtr term;        // parsed and closed over earlier definitions
};

struct Prelude {
  std::vector<PreludeDef> defs;
  TypeAbbrevs type_abbrevs;  // nonzero, even, odd

  const ExprPtr* lookup(const Name& name) const;
};

// Parses and closes the built-in definitions.  The result is cached.
const Prelude& prelude();

// Substitutes prelude definitions for their free occurrences.  Bound
// occurrences shadow as usual.
ExprPtr resolve(const ExprPtr& e, const Prelude& p);
Command resolve(const Command& c, const Prelude& p);

// As resolve, but substitutes the essence of each definition; the result
// stays inside the plain PCF sub-language when the input does.
ExprPtr resolve_for_pcf(const ExprPtr& e, const Prelude& p);

// Typechecks every definition and named type; returns a description of the
// first failure.  Run at CLI startup, so the prelude is its own regression
// test.
std::optional<std::string> verify_prelude(const Prelude& p);

}  // namespace deltah
