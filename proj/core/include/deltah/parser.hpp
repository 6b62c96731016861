#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "deltah/syntax.hpp"

namespace deltah {

struct ParseError : std::runtime_error {
  ParseError(std::string msg, int line, int column)
      : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                           std::to_string(column) + ": " + msg),
        line(line),
        column(column) {}
  int line;
  int column;
};

struct ParseOptions {
  // Source mode rejects the run-time checking forms; Trace mode accepts the
  // `<| ... |>` spellings the printer emits for them.
  enum class Mode { Source, Trace };
  Mode mode = Mode::Source;
  const TypeAbbrevs* abbrevs = nullptr;
};

ExprPtr parse_expr(std::string_view src, const ParseOptions& opts = {});
TypePtr parse_type(std::string_view src, const ParseOptions& opts = {});
Command parse_command(std::string_view src, const ParseOptions& opts = {});

}  // namespace deltah
