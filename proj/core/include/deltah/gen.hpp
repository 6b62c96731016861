#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "deltah/pcf.hpp"
#include "deltah/syntax.hpp"

// Goal-directed generation of well-typed programs.  A well-formed goal type
// is generated first; a plain PCF skeleton of the goal's essence is
// generated second; the skeleton is then decorated with annotations, casts,
// strong pairs, and refinements so the compile-time rules accept the result
// at the goal by construction.  Strong pairs decorate one shared skeleton
// twice, which is exactly the pair rule's essence side condition.

namespace deltah {

struct GenConfig {
  std::uint64_t seed = 0;
  int max_depth = 6;
  int max_numeral = 6;
  int predicate_pool = 5;   // how many predicate templates to draw from
  double wedge_prob = 0.3;  // chance a decoration introduces an intersection
  double cast_prob = 0.35;  // chance a reconstruction site inserts a cast
};

struct Generated {
  ExprPtr term;
  TypePtr type;
};

class Generator {
 public:
  explicit Generator(const GenConfig& cfg);

  TypePtr gen_type();
  // Goal shapes for the inversion properties.
  TypePtr gen_refinement_type();
  TypePtr gen_wedge_of_refinements();
  TypePtr gen_wedge_type();

  Generated gen_well_typed();
  Generated gen_well_typed(const TypePtr& goal);
  // Open term under the given context (context types must be well formed).
  Generated gen_under(const std::vector<std::pair<Name, TypePtr>>& ctx,
                      const TypePtr& goal);

  pcf::ExprPtr gen_pcf_term();

 private:
  friend struct GenImpl;
  GenConfig cfg_;
  std::uint64_t state_;
  int fresh_counter_ = 0;
};

}  // namespace deltah
