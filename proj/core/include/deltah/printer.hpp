#pragma once

#include <string>
#include <utility>
#include <vector>

#include "deltah/syntax.hpp"

namespace deltah {

struct PrintOptions {
  bool numerals = false;  // print succ-towers as decimal literals
  const TypeAbbrevs* abbrevs = nullptr;
};

std::string print(const TypePtr& t, const PrintOptions& opts = {});
std::string print(const ExprPtr& e, const PrintOptions& opts = {});
std::string print(const Command& c, const PrintOptions& opts = {});

}  // namespace deltah
