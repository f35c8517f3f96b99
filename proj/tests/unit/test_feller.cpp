#include <gtest/gtest.h>

#include <cmath>

#include "oracles/feller_oracle.hpp"
#include "stochexp/feller.hpp"

using namespace stochexp;

namespace {

double one(double) { return 1.0; }

Diffusion1D with_drift(std::function<double(double)> b, double c = 0.0) { return {std::move(b), one, c}; }

double pow4(double x) { return std::pow(std::abs(x), 4.0); }
double pow4_linear(double x) { return pow4(x) + x; }

}  // namespace

TEST(ScaleDensity, Examples) {
  const Diffusion1D zero = with_drift([](double) { return 0.0; });
  for (double x : {-3.0, 0.0, 2.5}) EXPECT_EQ(scale_density(zero, x), 1.0);

  const Diffusion1D linear = with_drift([](double x) { return x; });
  for (double x : {-2.0, -0.5, 0.0, 1.0, 2.0}) EXPECT_NEAR(scale_density(linear, x) / std::exp(-x * x), 1.0, 1e-9);

  EXPECT_NEAR(scale_density(with_drift(pow4_linear), 1.0) / std::exp(-7.0 / 5.0), 1.0, 1e-9);
}

TEST(ScaleDensity, Positive) {
  const Diffusion1D d = with_drift(pow4_linear);
  for (double x = -4.0; x <= 4.0; x += 0.125) EXPECT_GT(scale_density(d, x), 0.0) << x;
}

TEST(ScaleDensity, VanishingSigmaIsADomainError) {
  const Diffusion1D d{[](double) { return 0.0; }, [](double x) { return x - 0.5; }, 0.0};
  EXPECT_THROW(scale_density(d, 1.0), std::domain_error);
  EXPECT_THROW(feller_v(d, Boundary::plus), std::domain_error);
}

TEST(FellerV, BrownianMotionIsInfiniteBothWays) {
  const Diffusion1D d = with_drift([](double) { return 0.0; });
  EXPECT_EQ(feller_v(d, Boundary::plus).status, VStatus::infinite);
  EXPECT_EQ(feller_v(d, Boundary::minus).status, VStatus::infinite);
}

TEST(FellerV, ShiftedQuarticIsFinite) {
  EXPECT_EQ(feller_v(with_drift(pow4_linear), Boundary::plus).status, VStatus::finite);
}

TEST(FellerV, MatchesQuadratureOracle) {
  struct Case {
    std::function<double(double)> drift;
    double oracle;
  };
  const Case cases[] = {
      {pow4, oracle::v_pow4()},
      {pow4_linear, oracle::v_pow4_linear()},
      {[](double x) { return x * x; }, oracle::v_pow2()},
      {[](double x) { return x * x * x; }, oracle::v_pow3()},
  };
  for (const Case& c : cases) {
    const VResult r = feller_v(with_drift(c.drift), Boundary::plus);
    ASSERT_EQ(r.status, VStatus::finite);
    ASSERT_GT(r.partial_values.size(), 20u);
    EXPECT_EQ(r.truncations[20], std::ldexp(1.0, 20));
    // Same truncation as the oracle, then the reported value.
    EXPECT_NEAR(r.partial_values[20] / c.oracle, 1.0, 1e-6);
    EXPECT_NEAR(r.value / c.oracle, 1.0, 1e-6);
  }
}

TEST(FellerV, DiagnosticsAreRecorded) {
  const VResult r = feller_v(with_drift(pow4), Boundary::plus);
  EXPECT_EQ(r.truncations.size(), r.partial_values.size());
  EXPECT_FALSE(r.reason.empty());
  for (std::size_t k = 1; k < r.partial_values.size(); ++k) EXPECT_GE(r.partial_values[k], r.partial_values[k - 1]);
}

TEST(ClassifyExplosion, Table) {
  EXPECT_EQ(classify_explosion(with_drift([](double) { return 0.0; })).classification, ExplosionClass::no_explosion);
  EXPECT_EQ(classify_explosion(with_drift([](double x) { return x; })).classification, ExplosionClass::no_explosion);
  EXPECT_EQ(classify_explosion(with_drift(pow4)).classification, ExplosionClass::explodes_plus);
  EXPECT_EQ(classify_explosion(with_drift(pow4_linear)).classification, ExplosionClass::explodes_plus);
  EXPECT_EQ(classify_explosion(with_drift([](double x) { return -pow4(x); })).classification,
            ExplosionClass::explodes_minus);
  EXPECT_EQ(classify_explosion(with_drift([](double x) { return x * x * x; })).classification,
            ExplosionClass::explodes_both);
}

TEST(ClassifyExplosion, FlagsAgreeWithClassification) {
  for (auto b : {pow4, pow4_linear}) {
    const FellerReport r = classify_explosion(with_drift(b));
    EXPECT_EQ(r.classification == ExplosionClass::explodes_plus, r.v_plus.finite() && !r.v_minus.finite());
  }
}

TEST(ClassifyExplosion, OddDriftIsSymmetric) {
  // b(-x) = -b(x) makes the two boundaries mirror images.
  const FellerReport r = classify_explosion(with_drift([](double x) { return x * x * x + x; }));
  ASSERT_TRUE(r.v_plus.finite());
  ASSERT_TRUE(r.v_minus.finite());
  EXPECT_NEAR(r.v_plus.value / r.v_minus.value, 1.0, 1e-9);
}

TEST(ClassifyExplosion, MonotoneInDrift) {
  // b1 >= b2 >= 0 on [0, inf): v_plus(b1) <= v_plus(b2).
  const double v1 = feller_v(with_drift(pow4_linear), Boundary::plus).value;
  const double v2 = feller_v(with_drift(pow4), Boundary::plus).value;
  EXPECT_LE(v1, v2 * (1.0 + 1e-6));
  const double v3 = feller_v(with_drift([](double x) { return std::pow(std::abs(x), 3.0) + 1.0; }), Boundary::plus).value;
  const double v4 = feller_v(with_drift([](double x) { return std::pow(std::abs(x), 3.0); }), Boundary::plus).value;
  EXPECT_LE(v3, v4 * (1.0 + 1e-6));
}

TEST(ClassifyExplosion, PowerFlipsAcrossOne) {
  auto power = [](double alpha) { return [alpha](double x) { return std::pow(std::abs(x), alpha); }; };
  EXPECT_EQ(classify_explosion(with_drift(power(0.5))).classification, ExplosionClass::no_explosion);
  EXPECT_EQ(classify_explosion(with_drift(power(2.0))).classification, ExplosionClass::explodes_plus);
}

TEST(ClassifyExplosion, InvariantUnderReferencePoint) {
  const std::function<double(double)> drifts[] = {[](double) { return 0.0; }, [](double x) { return x; }, pow4,
                                                  pow4_linear};
  for (const auto& b : drifts) {
    const ExplosionClass base = classify_explosion(with_drift(b, 0.0)).classification;
    for (double c : {1.0, -1.0}) EXPECT_EQ(classify_explosion(with_drift(b, c)).classification, base) << c;
  }
}

TEST(ClassifyExplosion, InconclusiveTailIsReportedAsIndeterminate) {
  // Barely superlinear drift: the tail decays too slowly to settle on 2^60.
  const FellerReport r = classify_explosion(with_drift([](double x) { return std::pow(std::abs(x), 1.23); }));
  EXPECT_EQ(r.v_plus.status, VStatus::indeterminate);
  EXPECT_EQ(r.classification, ExplosionClass::indeterminate);
  EXPECT_FALSE(r.v_plus.reason.empty());
}

TEST(ClassifyExplosion, ToString) {
  EXPECT_STREQ(to_string(ExplosionClass::explodes_plus), "explodes_plus");
  EXPECT_STREQ(to_string(VStatus::indeterminate), "indeterminate");
}
