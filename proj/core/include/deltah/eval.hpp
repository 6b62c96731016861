#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "deltah/syntax.hpp"

// Operational semantics of the contract calculus: essential reduction and
// evaluation (the p-relations), checking reduction and contextual checking
// with blame (the c-relations), and strategy-driven exploration of their
// nondeterministic union.

namespace deltah {

// The base axiom that fired, or the structural choice rule when a step goes
// through a pair side or an active-check body (e.g. "EC-PairL:RC-Nat").
// Context lifts keep the inner name.  `essential` marks p-steps; evaluation
// inside an active check counts as checking even when the inner step is
// essential.
struct StepLabel {
  std::string rule;
  bool essential = false;
};

using PSuccessor = std::pair<StepLabel, ExprPtr>;
using CSuccessor = std::pair<StepLabel, Command>;

// Root essential reductions.  pred 0 intentionally has none.
std::vector<PSuccessor> reduce_p(const ExprPtr& m);
// Closes reduce_p under frames and synchronized pair stepping (the successor
// set of a pair is the cartesian product of its components' successors).
std::vector<PSuccessor> step_p(const ExprPtr& m);

// Root checking reductions, including the two-element wedge choices.
std::vector<CSuccessor> reduce_c(const ExprPtr& m);
// Closes reduce_c under frames, active-check bodies, and independent pair
// sides; any sub-derivation reaching blame collapses the whole term to blame
// in one step.
std::vector<CSuccessor> step_c(const ExprPtr& m);

// The union of step_p and step_c on commands.  Blame has no successors.
std::vector<CSuccessor> step_all(const Command& c);

inline constexpr int kDefaultFuel = 10000;
inline constexpr int kDefaultMaxStates = 100000;

struct Strategy {
  enum class Kind { First, Exhaustive, Random };
  Kind kind = Kind::First;
  int max_states = kDefaultMaxStates;  // Exhaustive only
  std::uint64_t seed = 0;              // Random only

  static Strategy first() { return {Kind::First, 0, 0}; }
  static Strategy exhaustive(int max_states = kDefaultMaxStates) {
    return {Kind::Exhaustive, max_states, 0};
  }
  static Strategy random(std::uint64_t seed) {
    return {Kind::Random, 0, seed};
  }
};

struct EvalResult {
  std::vector<ExprPtr> values;  // deduplicated up to alpha equivalence
  bool blame = false;
  std::vector<ExprPtr> stuck;
  std::vector<ExprPtr> fuel_exhausted;  // frontier terms when budgets ran out
  int steps_used = 0;
  int states_explored = 0;
};

EvalResult eval(const Command& start, const Strategy& strategy,
                int fuel = kDefaultFuel, int jobs = 1);
EvalResult eval(const ExprPtr& m, const Strategy& strategy,
                int fuel = kDefaultFuel, int jobs = 1);

// The labeled path followed by a First or Random strategy (throws
// std::invalid_argument for Exhaustive).
std::vector<CSuccessor> trace(const ExprPtr& m, const Strategy& strategy,
                              int fuel = kDefaultFuel);

}  // namespace deltah
