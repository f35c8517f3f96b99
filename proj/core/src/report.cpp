#include "stochexp/report.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace stochexp {

Estimate Estimate::from_mc(std::string name, const McEstimate& mc) {
  return {std::move(name), mc.mean, mc.std_error, mc.n_paths, false};
}

Estimate Estimate::exact_value(std::string name, double value) { return {std::move(name), value, 0.0, 0, true}; }

const char* to_string(Rule rule) noexcept {
  switch (rule) {
    case Rule::within_se: return "within_se";
    case Rule::below: return "below";
    case Rule::above: return "above";
    case Rule::at_most: return "at_most";
    case Rule::at_least: return "at_least";
    case Rule::within_rel: return "within_rel";
  }
  return "within_se";
}

Rule rule_from_string(const std::string& name) {
  for (Rule r : {Rule::within_se, Rule::below, Rule::above, Rule::at_most, Rule::at_least, Rule::within_rel})
    if (name == to_string(r)) return r;
  throw std::invalid_argument("unknown verdict rule '" + name + "'");
}

namespace {

const Estimate& lookup(const std::vector<Estimate>& estimates, const std::string& name) {
  for (const Estimate& e : estimates)
    if (e.name == name) return e;
  throw std::invalid_argument("verdict references unknown estimate '" + name + "'");
}

}  // namespace

bool evaluate(const Verdict& verdict, const std::vector<Estimate>& estimates) {
  const Estimate& lhs = lookup(estimates, verdict.lhs);
  double ref = verdict.target;
  double se2 = lhs.std_error * lhs.std_error;
  if (!verdict.rhs.empty()) {
    const Estimate& rhs = lookup(estimates, verdict.rhs);
    ref += rhs.value;
    se2 += rhs.std_error * rhs.std_error;
  }
  const double se = std::sqrt(se2);
  const double a = lhs.value;
  switch (verdict.rule) {
    case Rule::within_se: return std::abs(a - ref) <= verdict.k * se;
    case Rule::below: return a + verdict.k * se < ref;
    case Rule::above: return a - verdict.k * se > ref;
    case Rule::at_most: return a <= ref;
    case Rule::at_least: return a >= ref;
    case Rule::within_rel: return std::abs(a - ref) <= verdict.k * std::abs(ref);
  }
  return false;
}

bool reevaluate(const ScenarioReport& report) {
  bool ok = true;
  for (const Verdict& v : report.verdicts) ok = evaluate(v, report.estimates) && ok;
  return ok;
}

const Estimate* ScenarioReport::find(const std::string& name) const noexcept {
  for (const Estimate& e : estimates)
    if (e.name == name) return &e;
  return nullptr;
}

bool ScenarioReport::all_passed() const noexcept {
  for (const Verdict& v : verdicts)
    if (!v.passed) return false;
  return true;
}

void ScenarioReport::add_parameter(std::string key, double value) {
  parameters.emplace_back(std::move(key), format_double(value));
}
void ScenarioReport::add_parameter(std::string key, std::string value) {
  parameters.emplace_back(std::move(key), std::move(value));
}
void ScenarioReport::add_diagnostic(std::string key, double value) {
  diagnostics.emplace_back(std::move(key), format_double(value));
}
void ScenarioReport::add_diagnostic(std::string key, std::string value) {
  diagnostics.emplace_back(std::move(key), std::move(value));
}

Estimate& ScenarioReport::add(Estimate estimate) {
  if (find(estimate.name)) throw std::invalid_argument("duplicate estimate '" + estimate.name + "'");
  estimates.push_back(std::move(estimate));
  return estimates.back();
}

const Verdict& ScenarioReport::check(std::string name, Rule rule, std::string lhs, std::string rhs, double target,
                                     double k, std::string description) {
  Verdict v{std::move(name), rule, std::move(lhs), std::move(rhs), target, k, false, std::move(description)};
  v.passed = evaluate(v, estimates);
  verdicts.push_back(std::move(v));
  return verdicts.back();
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

}  // namespace stochexp
