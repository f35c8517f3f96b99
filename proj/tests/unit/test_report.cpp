#include <gtest/gtest.h>

#include <cmath>

#include "stochexp/report.hpp"

using namespace stochexp;

namespace {

ScenarioReport table() {
  ScenarioReport r;
  r.scenario = "unit";
  r.add(Estimate::from_mc("a", {1.02, 0.01, 100}));
  r.add(Estimate::from_mc("b", {0.90, 0.01, 100}));
  r.add(Estimate::exact_value("c", 5.0));
  return r;
}

}  // namespace

TEST(Estimate, Intervals) {
  const Estimate e = Estimate::from_mc("x", {2.0, 0.5, 10});
  EXPECT_FALSE(e.exact);
  EXPECT_EQ(e.n, 10u);
  EXPECT_DOUBLE_EQ(e.ci_low(), 2.0 - 0.98);
  EXPECT_DOUBLE_EQ(e.ci_high(), 2.0 + 0.98);
  const Estimate x = Estimate::exact_value("y", 3.0);
  EXPECT_TRUE(x.exact);
  EXPECT_EQ(x.std_error, 0.0);
}

TEST(Verdict, Rules) {
  ScenarioReport r = table();
  EXPECT_TRUE(r.check("v1", Rule::within_se, "a", "", 1.0, 3.0, "").passed);
  EXPECT_FALSE(r.check("v2", Rule::within_se, "a", "", 1.0, 1.0, "").passed);
  EXPECT_TRUE(r.check("v3", Rule::below, "b", "", 1.0, 3.0, "").passed);
  EXPECT_FALSE(r.check("v4", Rule::below, "b", "", 0.92, 3.0, "").passed);
  // a - b = 0.12 with combined se sqrt(2) 0.01.
  EXPECT_TRUE(r.check("v5", Rule::above, "a", "b", 0.0, 3.0, "").passed);
  EXPECT_FALSE(r.check("v6", Rule::above, "a", "b", 0.1, 3.0, "").passed);
  EXPECT_TRUE(r.check("v7", Rule::at_most, "c", "", 5.0, 0.0, "").passed);
  EXPECT_FALSE(r.check("v8", Rule::at_least, "c", "", 5.5, 0.0, "").passed);
  EXPECT_TRUE(r.check("v9", Rule::within_rel, "c", "", 5.04, 0.01, "").passed);
  EXPECT_FALSE(r.all_passed());
  EXPECT_EQ(reevaluate(r), r.all_passed());
}

TEST(Verdict, MissingEstimateThrows) {
  ScenarioReport r = table();
  EXPECT_THROW(r.check("bad", Rule::at_most, "missing", "", 0.0, 0.0, ""), std::invalid_argument);
  EXPECT_THROW(r.check("bad", Rule::at_most, "a", "missing", 0.0, 0.0, ""), std::invalid_argument);
  EXPECT_THROW(r.add(Estimate::exact_value("a", 1.0)), std::invalid_argument);
}

TEST(Verdict, ReevaluationIsPure) {
  ScenarioReport r = table();
  r.check("ok", Rule::within_se, "a", "", 1.0, 3.0, "");
  EXPECT_TRUE(reevaluate(r));
  r.estimates[0].value = 2.0;  // edit the table: the stored verdict is now stale
  EXPECT_TRUE(r.verdicts[0].passed);
  EXPECT_FALSE(reevaluate(r));
  EXPECT_FALSE(evaluate(r.verdicts[0], r.estimates));
}

TEST(Verdict, NonFiniteNeverPasses) {
  ScenarioReport r;
  r.add(Estimate::exact_value("n", std::nan("")));
  EXPECT_FALSE(r.check("a", Rule::at_most, "n", "", 1.0, 0.0, "").passed);
  EXPECT_FALSE(r.check("b", Rule::within_se, "n", "", 1.0, 3.0, "").passed);
}

TEST(Rule, NamesRoundTrip) {
  for (Rule rule : {Rule::within_se, Rule::below, Rule::above, Rule::at_most, Rule::at_least, Rule::within_rel})
    EXPECT_EQ(rule_from_string(to_string(rule)), rule);
  EXPECT_THROW(rule_from_string("bogus"), std::invalid_argument);
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(-2.0), "-2");
  EXPECT_EQ(format_double(HUGE_VAL), "inf");
  EXPECT_EQ(format_double(-HUGE_VAL), "-inf");
  EXPECT_EQ(format_double(std::nan("")), "nan");
  const double x = 0.6929780000123456;
  EXPECT_EQ(std::stod(format_double(x)), x);
}
