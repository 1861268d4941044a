#pragma once

#include "bosonic/polynomial.hpp"

#include <json.hpp>

#include <string>

namespace bosonic {

using json = nlohmann::ordered_json;

json to_json(const PolyXU& p);
PolyXU poly_from_json(const json& j);

json to_json(const Polynomial<4>& p);
Polynomial<4> poly4_from_json(const json& j);

/**
 * Inline expression grammar:
 *
 *   expr   := ['+'|'-'] term (('+'|'-') term)*
 *   term   := factor ('*' factor)*
 *   factor := primary ['^' ['-'] int]
 *   primary:= int ['/' int] | x<i> | u<i> | w | |x| | |u| | <x,u> | '(' expr ')'
 *
 * Indices are 1-based; w stands for omega_m and may carry a negative
 * power. |x| and |u| are only accepted with an even power.
 */
PolyXU parse_expression(const std::string& text, int m);
std::string to_expression(const PolyXU& p);

// Accepts either a path to a JSON file, inline JSON, or an inline expression.
PolyXU load_poly(const std::string& source, int m);

std::string format_double(double v);

}  // namespace bosonic
