#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace stochexp {

/// sgn with sgn(0) = -1.
inline double sign_nonpositive_negative(double x) noexcept { return x > 0.0 ? 1.0 : -1.0; }

/// Named scalar coefficient x -> f(x).
struct Coefficient {
  std::string name;
  std::function<double(double)> f;
};

/// Parses one of
///   zero | constant:c | linear | pow:alpha | pow-plus-linear:alpha | tanaka-sign
/// where pow is |x|^alpha. Throws std::invalid_argument for anything else.
Coefficient parse_coefficient(std::string_view text);

/// Names accepted by parse_coefficient, for help text.
std::vector<std::string> coefficient_catalog();

}  // namespace stochexp
