#pragma once

#include <functional>
#include <string>

namespace gptlab {

/// Compiles an arithmetic expression in the variables r and theta.
/// Supports numbers, pi, + - * / ^, unary minus, parentheses, and the
/// functions sin, cos, tan, exp, log, sqrt, abs.
std::function<double(double, double)> parse_expression(const std::string& text);

}  // namespace gptlab
