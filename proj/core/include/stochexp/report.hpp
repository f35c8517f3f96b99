#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stochexp/girsanov.hpp"

namespace stochexp {

/// One row of a scenario table: a Monte Carlo estimate or an exact (deterministic) value.
struct Estimate {
  std::string name;
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
  bool exact = true;

  double ci_low() const noexcept { return value - 1.96 * std_error; }
  double ci_high() const noexcept { return value + 1.96 * std_error; }

  static Estimate from_mc(std::string name, const McEstimate& mc);
  static Estimate exact_value(std::string name, double value);
};

/// How a verdict compares its estimate `lhs` with the reference
///   ref = (rhs.value if rhs is named, else 0) + target,
/// with se = sqrt(se_lhs^2 + se_rhs^2).
enum class Rule {
  within_se,   // |lhs - ref| <= k se
  below,       // lhs + k se < ref
  above,       // lhs - k se > ref
  at_most,     // lhs <= ref
  at_least,    // lhs >= ref
  within_rel,  // |lhs - ref| <= k |ref|
};

const char* to_string(Rule rule) noexcept;
/// Throws std::invalid_argument for unknown names.
Rule rule_from_string(const std::string& name);

struct Verdict {
  std::string name;
  Rule rule = Rule::within_se;
  std::string lhs;
  std::string rhs;  // empty: compare against target alone
  double target = 0.0;
  double k = 0.0;
  bool passed = false;
  std::string description;
};

struct ScenarioReport {
  std::string scenario;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<Estimate> estimates;
  std::vector<Verdict> verdicts;
  std::vector<std::pair<std::string, std::string>> diagnostics;
  std::uint64_t master_seed = 0;
  std::optional<double> wall_clock_seconds;

  const Estimate* find(const std::string& name) const noexcept;
  bool all_passed() const noexcept;

  void add_parameter(std::string key, double value);
  void add_parameter(std::string key, std::string value);
  void add_diagnostic(std::string key, double value);
  void add_diagnostic(std::string key, std::string value);
  Estimate& add(Estimate estimate);

  /// Appends a verdict and evaluates it against the current table.
  /// Throws std::invalid_argument if it names an estimate not in the table.
  const Verdict& check(std::string name, Rule rule, std::string lhs, std::string rhs, double target, double k,
                       std::string description);
};

/// Pure re-evaluation of one verdict from a table. Throws std::invalid_argument when an
/// estimate the verdict references is missing.
bool evaluate(const Verdict& verdict, const std::vector<Estimate>& estimates);
/// Re-evaluates every verdict; true iff all pass.
bool reevaluate(const ScenarioReport& report);

/// Shortest round-trip decimal text for a double ("inf", "-inf", "nan" for specials).
std::string format_double(double value);

}  // namespace stochexp
