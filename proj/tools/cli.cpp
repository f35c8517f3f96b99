#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "stochexp/catalog.hpp"
#include "stochexp/experiments.hpp"

namespace stochexp::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Raw {
  double paths = 10000;
  std::string format = "json";
};

void add_common(CLI::App& sub, RunConfig& cfg, Raw& raw) {
  sub.add_option("--seed", cfg.seed, "master seed");
  sub.add_option("--paths", raw.paths, "number of Monte Carlo paths (>= 2)");
  sub.add_option("--dt", cfg.base_step, "base time step")->check(CLI::PositiveNumber);
  sub.add_option("--horizon", cfg.horizon, "time horizon T")->check(CLI::PositiveNumber);
  sub.add_option("--format", raw.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  sub.add_option("--out", cfg.out, "output file (default stdout)");
  sub.add_option("--jobs", cfg.jobs, "worker threads (0 = all cores)");
  sub.add_flag("--no-timestamp", [&cfg](std::int64_t) { cfg.timestamp = false; },
               "omit wall-clock time and timestamp from the report");
}

void add_sde(CLI::App& sub, RunConfig& cfg) {
  sub.add_option("--x0", cfg.x0, "initial value");
  sub.add_option("--xmax", cfg.x_max, "explosion threshold")->check(CLI::PositiveNumber);
}

void add_coefficients(CLI::App& sub, RunConfig& cfg) {
  sub.add_option("--drift", cfg.drift, "drift from the catalog");
  sub.add_option("--diffusion", cfg.diffusion, "diffusion from the catalog");
}

Json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

double read_number(const Json& j) {
  if (j.is_number()) return j.get<double>();
  const std::string s = j.get<std::string>();
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  if (s == "nan") return std::nan("");
  throw std::invalid_argument("report: malformed number '" + s + "'");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string g17(double v) {
  if (!std::isfinite(v)) return format_double(v);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_g(const std::string& s) {
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  if (s == "nan") return std::nan("");
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("csv: malformed number '" + s + "'");
  return v;
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

RunConfig parse_args(const std::vector<std::string>& args, std::string* help_out) {
  RunConfig cfg;
  Raw raw;
  CLI::App app{"Stochastic exponential and explosion experiments", "stochexp"};
  app.require_subcommand(1);

  CLI::App* simulate = app.add_subcommand("simulate", "Euler-Maruyama paths of a catalog SDE");
  CLI::App* feller = app.add_subcommand("feller", "Feller's test for explosions");
  CLI::App* corollary2 = app.add_subcommand("corollary2", "E_P[Z_X(T)] against P~(eta > T)");
  CLI::App* nonunique = app.add_subcommand("nonunique", "exponential tilts as candidate measures");
  CLI::App* nonexist = app.add_subcommand("nonexist", "divergence of W - int X du near T");
  CLI::App* tanaka = app.add_subcommand("tanaka", "Tanaka's equation and its mirror solution");
  CLI::App* integrability = app.add_subcommand("integrability", "finite energy up to explosion");

  for (CLI::App* sub : {simulate, feller, corollary2, nonunique, nonexist, tanaka, integrability})
    add_common(*sub, cfg, raw);
  add_coefficients(*simulate, cfg);
  add_sde(*simulate, cfg);
  add_coefficients(*feller, cfg);
  feller->add_option("--x0", cfg.x0, "reference point of the scale function");
  for (CLI::App* sub : {corollary2, integrability}) {
    sub->add_option("--alpha", cfg.alpha, "drift exponent (> 3)");
    add_sde(*sub, cfg);
  }
  nonunique->add_option("--lambda", cfg.lambdas, "tilt parameter (repeatable)")->take_all();
  nonexist->add_option("--eps", cfg.eps, "distance to T (repeatable, decreasing)")->take_all();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    if (help_out) *help_out = app.help();
    return RunConfig{};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  for (CLI::App* sub : app.get_subcommands())
    if (sub->parsed()) cfg.scenario = sub->get_name();

  if (!(raw.paths >= 2.0) || std::floor(raw.paths) != raw.paths || raw.paths > 1e12)
    throw UsageError("--paths must be an integer >= 2");
  cfg.n_paths = static_cast<std::size_t>(raw.paths);
  cfg.format = raw.format == "csv" ? Format::csv : Format::json;

  if (cfg.alpha && !(*cfg.alpha > 3.0))
    throw UsageError("--alpha must exceed 3 (the martingale regime of the exponential)");
  if (cfg.horizon && cfg.base_step > *cfg.horizon) throw UsageError("--dt must not exceed --horizon");
  if (cfg.scenario == "nonexist") {
    const double t = cfg.horizon.value_or(1.0);
    for (std::size_t i = 0; i < cfg.eps.size(); ++i) {
      if (!(cfg.eps[i] > 0.0 && cfg.eps[i] < t)) throw UsageError("--eps values must lie in (0, horizon)");
      if (i && !(cfg.eps[i] < cfg.eps[i - 1])) throw UsageError("--eps values must be strictly decreasing");
    }
  }
  if (cfg.scenario == "simulate" || cfg.scenario == "feller") {
    try {
      parse_coefficient(cfg.drift);
      parse_coefficient(cfg.diffusion);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  return cfg;
}

ScenarioReport run(const RunConfig& cfg) {
  const RunContext ctx{cfg.seed, cfg.jobs};
  SolveConfig solve;
  solve.base_step = cfg.base_step;
  if (cfg.x_max) solve.x_max = *cfg.x_max;

  if (cfg.scenario == "corollary2") {
    Corollary2Params p;
    p.alpha = cfg.alpha.value_or(p.alpha);
    p.x0 = cfg.x0.value_or(p.x0);
    p.horizon = cfg.horizon.value_or(p.horizon);
    p.n_paths = cfg.n_paths;
    p.config = solve;
    return run_corollary2_gap(p, ctx);
  }
  if (cfg.scenario == "integrability") {
    IntegrabilityParams p;
    p.alpha = cfg.alpha.value_or(p.alpha);
    p.x0 = cfg.x0.value_or(p.x0);
    p.horizon = cfg.horizon.value_or(p.horizon);
    p.n_paths = cfg.n_paths;
    p.config = solve;
    return run_integrability_check(p, ctx);
  }
  if (cfg.scenario == "nonunique") {
    NonuniquenessParams p;
    if (!cfg.lambdas.empty()) p.lambdas = cfg.lambdas;
    p.horizon = cfg.horizon.value_or(p.horizon);
    p.n_paths = cfg.n_paths;
    p.base_step = cfg.base_step;
    return run_candidate_nonuniqueness(p, ctx);
  }
  if (cfg.scenario == "nonexist") {
    NonexistenceParams p;
    p.epsilons = cfg.eps;
    p.horizon = cfg.horizon.value_or(p.horizon);
    p.n_paths = cfg.n_paths;
    p.base_step = cfg.base_step;
    return run_candidate_nonexistence(p, ctx);
  }
  if (cfg.scenario == "tanaka") {
    TanakaParams p;
    p.horizon = cfg.horizon.value_or(p.horizon);
    p.n_paths = cfg.n_paths;
    p.base_step = cfg.base_step;
    return run_tanaka(p, ctx);
  }
  if (cfg.scenario == "simulate") {
    SimulationParams p;
    p.drift = cfg.drift;
    p.diffusion = cfg.diffusion;
    p.x0 = cfg.x0.value_or(p.x0);
    p.horizon = cfg.horizon.value_or(p.horizon);
    p.n_paths = cfg.n_paths;
    p.config = solve;
    return run_simulation(p, ctx);
  }
  if (cfg.scenario == "feller") {
    FellerParams p;
    p.drift = cfg.drift;
    p.diffusion = cfg.diffusion;
    p.reference = cfg.x0.value_or(p.reference);
    return run_feller_classification(p, ctx);
  }
  throw std::invalid_argument("unknown scenario '" + cfg.scenario + "'");
}

std::string to_json(const ScenarioReport& report, bool include_timestamp) {
  Json j;
  j["scenario"] = report.scenario;
  j["master_seed"] = report.master_seed;
  Json params = Json::object();
  for (const auto& [k, v] : report.parameters) params[k] = v;
  j["parameters"] = params;
  Json estimates = Json::array();
  for (const Estimate& e : report.estimates)
    estimates.push_back({{"name", e.name},
                         {"value", number(e.value)},
                         {"std_error", number(e.std_error)},
                         {"ci_low", number(e.ci_low())},
                         {"ci_high", number(e.ci_high())},
                         {"n", e.n},
                         {"exact", e.exact}});
  j["estimates"] = estimates;
  Json verdicts = Json::array();
  for (const Verdict& v : report.verdicts)
    verdicts.push_back({{"name", v.name},
                        {"rule", to_string(v.rule)},
                        {"lhs", v.lhs},
                        {"rhs", v.rhs},
                        {"target", number(v.target)},
                        {"k", number(v.k)},
                        {"passed", v.passed},
                        {"description", v.description}});
  j["verdicts"] = verdicts;
  Json diagnostics = Json::object();
  for (const auto& [k, v] : report.diagnostics) diagnostics[k] = v;
  j["diagnostics"] = diagnostics;
  j["all_passed"] = report.all_passed();
  if (include_timestamp) {
    if (report.wall_clock_seconds) j["wall_clock_seconds"] = *report.wall_clock_seconds;
    j["generated_at"] = utc_now();
  }
  return j.dump(2) + "\n";
}

ScenarioReport report_from_json(const std::string& text) {
  const Json j = Json::parse(text);
  ScenarioReport r;
  r.scenario = j.at("scenario").get<std::string>();
  r.master_seed = j.at("master_seed").get<std::uint64_t>();
  for (const auto& [k, v] : j.at("parameters").items()) r.parameters.emplace_back(k, v.get<std::string>());
  for (const Json& e : j.at("estimates"))
    r.estimates.push_back({e.at("name").get<std::string>(), read_number(e.at("value")), read_number(e.at("std_error")),
                           e.at("n").get<std::size_t>(), e.at("exact").get<bool>()});
  for (const Json& v : j.at("verdicts"))
    r.verdicts.push_back({v.at("name").get<std::string>(), rule_from_string(v.at("rule").get<std::string>()),
                          v.at("lhs").get<std::string>(), v.at("rhs").get<std::string>(), read_number(v.at("target")),
                          read_number(v.at("k")), v.at("passed").get<bool>(), v.at("description").get<std::string>()});
  for (const auto& [k, v] : j.at("diagnostics").items()) r.diagnostics.emplace_back(k, v.get<std::string>());
  if (j.contains("wall_clock_seconds")) r.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
  return r;
}

std::string to_csv(const ScenarioReport& report) {
  std::ostringstream out;
  out << "name,value,std_error,ci_low,ci_high,verdict\n";
  for (const Estimate& e : report.estimates) {
    std::string verdict;
    for (const Verdict& v : report.verdicts) {
      if (v.lhs != e.name) continue;
      if (!v.passed) verdict = "fail";
      else if (verdict.empty()) verdict = "pass";
    }
    out << csv_field(e.name) << ',' << g17(e.value) << ',' << g17(e.std_error) << ',' << g17(e.ci_low()) << ','
        << g17(e.ci_high()) << ',' << verdict << '\n';
  }
  return out.str();
}

std::vector<Estimate> estimates_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "name,value,std_error,ci_low,ci_high,verdict")
    throw std::invalid_argument("csv: unexpected header");
  std::vector<Estimate> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 6) throw std::invalid_argument("csv: expected 6 fields in '" + line + "'");
    Estimate e;
    e.name = f[0];
    e.value = parse_g(f[1]);
    e.std_error = parse_g(f[2]);
    e.exact = e.std_error == 0.0;
    out.push_back(e);
  }
  return out;
}

int emit_report(const ScenarioReport& report, const RunConfig& config) {
  const std::string text = config.format == Format::csv ? to_csv(report) : to_json(report, config.timestamp);
  if (config.out.empty()) {
    std::cout << text << std::flush;
    if (!std::cout) return kExitError;
  } else {
    std::ofstream file(config.out, std::ios::binary);
    if (!file) {
      std::cerr << "stochexp: cannot open '" << config.out << "' for writing\n";
      return kExitError;
    }
    file << text;
    file.close();
    if (!file) {
      std::cerr << "stochexp: failed writing '" << config.out << "'\n";
      return kExitError;
    }
  }
  return report.all_passed() ? kExitPass : kExitVerdictFailed;
}

int main_entry(int argc, const char* const* argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  RunConfig config;
  std::string help;
  try {
    config = parse_args(args, &help);
  } catch (const UsageError& e) {
    std::cerr << "stochexp: " << e.what() << "\nRun with --help for usage.\n";
    return kExitError;
  }
  if (config.scenario.empty()) {
    std::cout << help;
    return kExitPass;
  }
  ScenarioReport report;
  try {
    report = run(config);
  } catch (const std::exception& e) {
    std::cerr << "stochexp: " << config.scenario << ": " << e.what() << '\n';
    return kExitError;
  }
  return emit_report(report, config);
}

}  // namespace stochexp::cli
