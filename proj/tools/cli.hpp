#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stochexp/report.hpp"

namespace stochexp::cli {

enum class Format { csv, json };

/// Scenario ids accepted on the command line.
inline const std::vector<std::string> kScenarios{"simulate",  "feller", "corollary2",   "nonunique",
                                                 "nonexist",  "tanaka", "integrability"};

struct RunConfig {
  std::string scenario;
  std::uint64_t seed = 0;
  std::size_t n_paths = 10000;
  double base_step = 1e-3;
  std::optional<double> horizon;
  std::optional<double> alpha;
  std::optional<double> x0;
  std::optional<double> x_max;
  std::vector<double> lambdas;
  std::vector<double> eps;
  std::string drift = "zero";
  std::string diffusion = "constant:1";
  Format format = Format::json;
  std::string out;  // empty: stdout
  std::size_t jobs = 1;
  bool timestamp = true;
};

/// Bad command line; maps to exit status 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exit codes.
inline constexpr int kExitPass = 0;
inline constexpr int kExitVerdictFailed = 1;
inline constexpr int kExitError = 2;

/// Parses arguments after the program name. Throws UsageError on unknown flags,
/// malformed values or out-of-range parameters. `--help` yields a config with an empty
/// scenario and the help text in `help_out` (when given).
RunConfig parse_args(const std::vector<std::string>& args, std::string* help_out = nullptr);

/// Runs the configured scenario.
ScenarioReport run(const RunConfig& config);

std::string to_json(const ScenarioReport& report, bool include_timestamp);
std::string to_csv(const ScenarioReport& report);

/// Inverse of to_json (timestamp fields are ignored).
ScenarioReport report_from_json(const std::string& text);
/// Estimate rows (name, value, std_error) from to_csv output.
std::vector<Estimate> estimates_from_csv(const std::string& text);

/// Writes the report in the configured format; 0 if every verdict passed, 1 otherwise,
/// 2 when the output cannot be written.
int emit_report(const ScenarioReport& report, const RunConfig& config);

/// Whole program: parse, run, emit, with errors mapped to exit status 2.
int main_entry(int argc, const char* const* argv);

}  // namespace stochexp::cli
