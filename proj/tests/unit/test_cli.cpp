#include <gtest/gtest.h>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace stochexp;
using namespace stochexp::cli;

namespace {

RunConfig parse(std::vector<std::string> args) { return parse_args(args); }

ScenarioReport small_report(bool pass) {
  ScenarioReport r;
  r.scenario = "unit";
  r.master_seed = 3;
  r.add_parameter("alpha", 4.0);
  r.add(Estimate::from_mc("mean", {0.998, 0.004, 1000}));
  r.add(Estimate::exact_value("exact", 0.1 + 0.2));
  r.check("mean_is_one", Rule::within_se, "mean", "", pass ? 1.0 : 2.0, 3.0, "");
  r.add_diagnostic("note", "ok");
  return r;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path temp_path(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST(ParseArgs, Corollary2Echo) {
  const RunConfig c = parse({"corollary2", "--alpha", "4", "--seed", "7"});
  EXPECT_EQ(c.scenario, "corollary2");
  EXPECT_EQ(c.alpha, 4.0);
  EXPECT_EQ(c.seed, 7u);
}

TEST(ParseArgs, Defaults) {
  const RunConfig c = parse({"tanaka"});
  EXPECT_EQ(c.seed, 0u);
  EXPECT_EQ(c.n_paths, 10000u);
  EXPECT_EQ(c.base_step, 1e-3);
  EXPECT_EQ(c.format, Format::json);
  EXPECT_EQ(c.jobs, 1u);
  EXPECT_TRUE(c.timestamp);
}

TEST(ParseArgs, FellerDrift) {
  const RunConfig c = parse({"feller", "--drift", "pow:4"});
  EXPECT_EQ(c.scenario, "feller");
  EXPECT_EQ(c.drift, "pow:4");
  const ScenarioReport r = run(c);
  EXPECT_EQ(r.scenario, "feller");
  EXPECT_EQ(r.diagnostics.front().second, "explodes_plus");
}

TEST(ParseArgs, CommonFlags) {
  const RunConfig c = parse({"nonunique", "--paths", "1e5", "--dt", "0.01", "--horizon", "2", "--lambda", "-1",
                             "--lambda", "0.5", "--format", "csv", "--out", "x.csv", "--jobs", "4", "--no-timestamp"});
  EXPECT_EQ(c.n_paths, 100000u);
  EXPECT_EQ(c.base_step, 0.01);
  EXPECT_EQ(c.horizon, 2.0);
  EXPECT_EQ(c.lambdas, (std::vector<double>{-1.0, 0.5}));
  EXPECT_EQ(c.format, Format::csv);
  EXPECT_EQ(c.out, "x.csv");
  EXPECT_EQ(c.jobs, 4u);
  EXPECT_FALSE(c.timestamp);
  EXPECT_EQ(parse({"nonexist", "--eps", "0.1", "--eps", "0.01"}).eps, (std::vector<double>{0.1, 0.01}));
}

TEST(ParseArgs, UsageErrors) {
  EXPECT_THROW(parse({"corollary2", "--alpha", "2"}), UsageError);
  EXPECT_THROW(parse({"integrability", "--alpha", "3"}), UsageError);
  EXPECT_THROW(parse({"corollary2", "--bogus"}), UsageError);
  EXPECT_THROW(parse({"corollary2", "--seed", "abc"}), UsageError);
  EXPECT_THROW(parse({"tanaka", "--paths", "1"}), UsageError);
  EXPECT_THROW(parse({"tanaka", "--paths", "2.5"}), UsageError);
  EXPECT_THROW(parse({"tanaka", "--format", "xml"}), UsageError);
  EXPECT_THROW(parse({"tanaka", "--dt", "-1"}), UsageError);
  EXPECT_THROW(parse({"feller", "--drift", "pow:"}), UsageError);
  EXPECT_THROW(parse({"nonexist", "--eps", "2"}), UsageError);
  EXPECT_THROW(parse({"nowhere"}), UsageError);
  EXPECT_THROW(parse({}), UsageError);
  // Flags belong to their scenarios.
  EXPECT_THROW(parse({"tanaka", "--alpha", "4"}), UsageError);
}

TEST(ParseArgs, Help) {
  std::string help;
  const RunConfig c = parse_args({"--help"}, &help);
  EXPECT_TRUE(c.scenario.empty());
  EXPECT_NE(help.find("corollary2"), std::string::npos);
}

TEST(MainEntry, ExitCodes) {
  const char* usage[] = {"stochexp", "corollary2", "--alpha", "2"};
  EXPECT_EQ(main_entry(4, usage), kExitError);
  const std::string out = temp_path("stochexp_cli_exit.json").string();
  const char* ok[] = {"stochexp", "feller", "--drift", "pow:4", "--out", out.c_str(), "--no-timestamp"};
  EXPECT_EQ(main_entry(7, ok), kExitPass);
  const char* bad_out[] = {"stochexp", "feller", "--out", "/nonexistent-dir/x/y.json"};
  EXPECT_EQ(main_entry(4, bad_out), kExitError);
  // Barely superlinear drift: indeterminate Feller verdict.
  const char* fails[] = {"stochexp", "feller", "--drift", "pow:1.23", "--out", out.c_str()};
  EXPECT_EQ(main_entry(6, fails), kExitVerdictFailed);
  std::filesystem::remove(out);
}

TEST(EmitReport, ExitStatusFollowsVerdicts) {
  RunConfig c;
  c.out = temp_path("stochexp_emit.json").string();
  EXPECT_EQ(emit_report(small_report(true), c), kExitPass);
  EXPECT_EQ(emit_report(small_report(false), c), kExitVerdictFailed);
  c.out = "/nonexistent-dir/report.json";
  EXPECT_EQ(emit_report(small_report(true), c), kExitError);
  std::filesystem::remove(temp_path("stochexp_emit.json"));
}

TEST(Json, RoundTrip) {
  const ScenarioReport r = small_report(true);
  const std::string text = to_json(r, false);
  const ScenarioReport back = report_from_json(text);
  EXPECT_EQ(back.scenario, r.scenario);
  EXPECT_EQ(back.master_seed, r.master_seed);
  ASSERT_EQ(back.estimates.size(), r.estimates.size());
  for (std::size_t i = 0; i < r.estimates.size(); ++i) {
    EXPECT_EQ(back.estimates[i].value, r.estimates[i].value);
    EXPECT_EQ(back.estimates[i].std_error, r.estimates[i].std_error);
  }
  EXPECT_EQ(reevaluate(back), r.all_passed());
  EXPECT_EQ(to_json(back, false), text);
}

TEST(Json, TimestampIsOptional) {
  ScenarioReport r = small_report(true);
  r.wall_clock_seconds = 1.5;
  EXPECT_EQ(nlohmann::json::parse(to_json(r, false)).count("wall_clock_seconds"), 0u);
  EXPECT_EQ(nlohmann::json::parse(to_json(r, true)).count("wall_clock_seconds"), 1u);
}

TEST(Json, NonFiniteValues) {
  ScenarioReport r;
  r.scenario = "unit";
  r.add(Estimate::exact_value("big", HUGE_VAL));
  const ScenarioReport back = report_from_json(to_json(r, false));
  EXPECT_TRUE(std::isinf(back.estimates[0].value));
}

TEST(Csv, RoundTripReevaluation) {
  for (bool pass : {true, false}) {
    const ScenarioReport r = small_report(pass);
    const std::vector<Estimate> rows = estimates_from_csv(to_csv(r));
    ASSERT_EQ(rows.size(), r.estimates.size());
    for (const Verdict& v : r.verdicts) EXPECT_EQ(evaluate(v, rows), v.passed);
  }
}

TEST(Csv, HeaderAndColumns) {
  const std::string csv = to_csv(small_report(true));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "name,value,std_error,ci_low,ci_high,verdict");
  EXPECT_NE(csv.find(",pass"), std::string::npos);
}

TEST(Formats, CsvAndJsonAgree) {
  RunConfig c = parse({"tanaka", "--paths", "300", "--no-timestamp"});
  const ScenarioReport r = run(c);
  const std::vector<Estimate> rows = estimates_from_csv(to_csv(r));
  const ScenarioReport json = report_from_json(to_json(r, false));
  ASSERT_EQ(rows.size(), json.estimates.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].name, json.estimates[i].name);
    const double a = rows[i].value;
    const double b = json.estimates[i].value;
    EXPECT_LE(std::abs(a - b), 1e-12 * std::max(std::abs(a), std::abs(b))) << rows[i].name;
  }
}

TEST(Determinism, JsonIndependentOfJobs) {
  for (const char* scenario : {"nonunique", "tanaka", "corollary2"}) {
    RunConfig c = parse({scenario, "--paths", "400", "--seed", "5", "--no-timestamp"});
    c.jobs = 1;
    const std::string one = to_json(run(c), false);
    c.jobs = 4;
    EXPECT_EQ(to_json(run(c), false), one) << scenario;
  }
}

TEST(Determinism, WrittenFilesAreByteIdentical) {
  const std::string a = temp_path("stochexp_det_a.json").string();
  const std::string b = temp_path("stochexp_det_b.json").string();
  const char* run_a[] = {"stochexp", "nonexist", "--paths", "50", "--jobs", "1", "--no-timestamp", "--out", a.c_str()};
  const char* run_b[] = {"stochexp", "nonexist", "--paths", "50", "--jobs", "4", "--no-timestamp", "--out", b.c_str()};
  main_entry(9, run_a);
  main_entry(9, run_b);
  EXPECT_EQ(read_file(a), read_file(b));
  EXPECT_FALSE(read_file(a).empty());
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}
