#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <string_view>

namespace wiener {

/// Exponents p, q, r live in (0, inf]; infinity is the IEEE value.
inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool is_inf(double x) noexcept { return std::isinf(x) && x > 0; }

/// 1/x with 1/inf = 0.
inline double reciprocal(double x) noexcept { return is_inf(x) ? 0.0 : 1.0 / x; }

/// Parses a positive real or the literal `inf`. Throws InvalidArgument.
double parse_extended(std::string_view text, const std::string& field);

/// Throws InvalidArgument unless x is in (0, inf].
void require_positive_extended(double x, const std::string& field);

/// Shortest round-trip decimal for finite values, `inf`, `-inf` or `nan` otherwise.
std::string format_number(double x);

}  // namespace wiener
