#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "deltah/gen.hpp"
#include "deltah/pcf.hpp"
#include "deltah/syntax.hpp"

// Property drivers: each named property runs one of the calculus invariants
// (determinism, essence simulation and invisibility, pair synchronization,
// preservation, progress, and the two inversion properties) over the
// worked example programs plus generated well-typed ones.

namespace deltah {

struct TraceStep {
  std::string rule;
  std::string command;  // printed
};

struct CounterExample {
  ExprPtr term;   // minimized failing input
  TypePtr type;   // inferred type, when the input is compile-typable
  std::vector<TraceStep> trace;
};

struct PropertyReport {
  std::string property;
  int cases = 0;
  int passed = 0;
  int unknown = 0;
  int failed = 0;
  // Total explored evaluation states; makes vacuous coverage visible.
  long long states_explored = 0;
  std::optional<CounterExample> counterexample;

  std::string to_json() const;
};

const std::vector<std::string>& property_names();
bool is_property_name(const std::string& name);

struct Corpus {
  std::vector<Generated> deltah;
  std::vector<pcf::ExprPtr> pcf;  // used by pcf-determinism
};

// Generated corpus for the property, with the worked example programs
// always included.
Corpus build_corpus(const std::string& property, const GenConfig& cfg,
                    int cases);

PropertyReport check_property(const std::string& property,
                              const Corpus& corpus, int fuel, int jobs = 1);

// Greedy minimizer: repeatedly applies subterm replacement, numeral
// reduction and leaf simplification while the oracle keeps failing.
ExprPtr shrink(const ExprPtr& counterexample,
               const std::function<bool(const ExprPtr&)>& still_fails);

// The worked examples: the two strong pairs, the delayed-cast program, and
// the failing-check program (the last one is deliberately not
// compile-typable).
std::vector<Generated> worked_examples();

// Individual example builders (also used by the CLI test programs).
ExprPtr succ_pair_term();
ExprPtr identity_pair_term();
ExprPtr delayed_cast_program();
ExprPtr failing_check_program();

}  // namespace deltah
