#include "stochexp/catalog.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace stochexp {

namespace {

double parse_number(std::string_view text, std::string_view what) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value))
    throw std::invalid_argument("coefficient '" + std::string(what) + "': malformed number '" +
                                std::string(text) + "'");
  return value;
}

}  // namespace

Coefficient parse_coefficient(std::string_view text) {
  const std::string name(text);
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const bool has_arg = colon != std::string_view::npos;
  const std::string_view arg = has_arg ? text.substr(colon + 1) : std::string_view{};

  if (!has_arg) {
    if (head == "zero") return {name, [](double) { return 0.0; }};
    if (head == "linear") return {name, [](double x) { return x; }};
    if (head == "tanaka-sign") return {name, sign_nonpositive_negative};
  } else {
    if (head == "constant") {
      const double c = parse_number(arg, head);
      return {name, [c](double) { return c; }};
    }
    if (head == "pow") {
      const double a = parse_number(arg, head);
      return {name, [a](double x) { return std::pow(std::abs(x), a); }};
    }
    if (head == "pow-plus-linear") {
      const double a = parse_number(arg, head);
      return {name, [a](double x) { return std::pow(std::abs(x), a) + x; }};
    }
  }
  throw std::invalid_argument("unknown coefficient '" + name + "' (expected one of: zero, constant:c, linear, "
                              "pow:alpha, pow-plus-linear:alpha, tanaka-sign)");
}

std::vector<std::string> coefficient_catalog() {
  return {"zero", "constant:c", "linear", "pow:alpha", "pow-plus-linear:alpha", "tanaka-sign"};
}

}  // namespace stochexp
