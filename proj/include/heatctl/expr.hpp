// Tiny expression evaluator for initial/boundary data: x, y, pi, numbers,
// sin/cos/exp, + - * / ^ and parentheses.
#pragma once

#include <functional>
#include <string>

namespace heatctl {

// Parses once, returns a callable f(x, y).  Throws config_error on bad syntax.
std::function<double(double, double)> parse_expression(const std::string& text);

}  // namespace heatctl
