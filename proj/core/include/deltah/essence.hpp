#pragma once

#include <optional>

#include "deltah/pcf.hpp"
#include "deltah/syntax.hpp"

// Essence erasure: strips casts, refinements, strong pairs, and run-time
// checking forms, leaving the plain PCF skeleton.  embed is the syntactic
// injection the other way; essence_expr(embed(p)) == p.

namespace deltah {

pcf::TypePtr essence_type(const TypePtr& t);
pcf::ExprPtr essence_expr(const ExprPtr& e);

TypePtr embed_type(const pcf::TypePtr& t);
ExprPtr embed(const pcf::ExprPtr& e);

// Strict subset converters: succeed exactly when the term/type uses no
// contract-calculus extension.  Inverse of embed/embed_type.
std::optional<pcf::TypePtr> to_pcf_type(const TypePtr& t);
std::optional<pcf::ExprPtr> to_pcf(const ExprPtr& e);

}  // namespace deltah
