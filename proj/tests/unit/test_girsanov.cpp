#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "stochexp/girsanov.hpp"
#include "stochexp/stochastic_exponential.hpp"

using namespace stochexp;

namespace {

std::vector<double> eval(const Functional& f, double t, std::vector<double> x, std::size_t out_size) {
  PathView v;
  v.dim = x.size();
  v.t = t;
  v.x = x;
  std::vector<double> out(out_size);
  f(v, out);
  return out;
}

Functional constant_matrix(std::vector<double> m) {
  return [m](const PathView&, std::span<double> out) { std::copy(m.begin(), m.end(), out.begin()); };
}

BrownianPath brownian(double horizon, double dt, std::uint64_t seed, std::uint64_t index, std::size_t dim = 1) {
  RngStream s(seed, index);
  return sample_brownian(make_grid(horizon, dt), s, dim);
}

McEstimate mean_of(const std::vector<double>& v) { return sample_mean(v); }

}  // namespace

TEST(Corollary2Transform, QuarticDrift) {
  SdeSpec spec;
  spec.drift = scalar([](double x) { return std::pow(std::abs(x), 4.0); });
  spec.diffusion = scalar([](double) { return 1.0; });
  spec.x0 = {0.0};
  const SdeSpec t = corollary2_transform(spec);
  for (double x = -3.0; x <= 3.0; x += 0.25)
    for (double time : {0.0, 0.5, 1.0}) EXPECT_EQ(eval(t.drift, time, {x}, 1)[0], std::pow(std::abs(x), 4.0) + x);
  EXPECT_EQ(t.x0, spec.x0);
}

TEST(Corollary2Transform, ZeroDiffusionLeavesDrift) {
  SdeSpec spec;
  spec.dim = 2;
  spec.drift = markov([](double t, std::span<const double> x, std::span<double> out) {
    out[0] = x[0] * x[1] + t;
    out[1] = -x[0];
  });
  spec.diffusion = constant_matrix({0, 0, 0, 0});
  spec.x0 = {1.0, 2.0};
  const SdeSpec t = corollary2_transform(spec);
  for (double a = -2.0; a <= 2.0; a += 0.5)
    for (double b = -1.0; b <= 1.0; b += 0.5)
      for (double time : {0.0, 0.3}) EXPECT_EQ(eval(t.drift, time, {a, b}, 2), eval(spec.drift, time, {a, b}, 2));
}

TEST(Corollary2Transform, IdentityDiffusionAddsState) {
  SdeSpec spec;
  spec.dim = 2;
  spec.drift = constant_matrix({0, 0});
  spec.diffusion = constant_matrix({1, 0, 0, 1});
  spec.x0 = {0.0, 0.0};
  const SdeSpec t = corollary2_transform(spec);
  for (double a = -2.0; a <= 2.0; a += 0.5)
    for (double b = -1.0; b <= 1.0; b += 0.5) EXPECT_EQ(eval(t.drift, 0.0, {a, b}, 2), (std::vector<double>{a, b}));
}

TEST(TiltWeight, ZeroLambda) {
  const BrownianPath w = brownian(1.0, 0.01, 1, 0);
  const std::vector<double> lambda{0.0};
  EXPECT_EQ(exponential_tilt_weight(w, lambda, 1.0).weight, 1.0);
}

TEST(TiltWeight, Arithmetic) {
  const double lambda = 0.6;
  const double horizon = 2.0;
  BrownianPath w{make_grid(horizon, 1.0), 1, {0.0, 0.3, lambda * horizon}};
  const std::vector<double> l{lambda};
  EXPECT_NEAR(exponential_tilt_weight(w, l, horizon).weight, std::exp(lambda * lambda * horizon / 2.0), 1e-15);
  EXPECT_THROW(exponential_tilt_weight(w, l, 3.0), std::invalid_argument);
}

TEST(TiltWeight, MeanIsOne) {
  const int n = 100000;
  const std::vector<double> l{1.0};
  std::vector<double> weights(n);
  for (int i = 0; i < n; ++i) weights[i] = exponential_tilt_weight(brownian(1.0, 1.0, 2, i), l, 1.0).weight;
  const McEstimate m = mean_of(weights);
  EXPECT_LE(std::abs(m.mean - 1.0), 3.0 * m.std_error);
}

TEST(QnWeight, ZeroIntegrand) {
  const BrownianPath w = brownian(1.0, 0.01, 3, 0);
  const std::vector<double> x(w.values.size(), 0.0);
  for (double n : {0.1, 1.0, 100.0}) EXPECT_EQ(qn_weight(x, 1, w, n, 1.0).weight, 1.0);
}

TEST(QnWeight, InactiveTruncationIsTheTilt) {
  const BrownianPath w = brownian(1.0, 0.01, 3, 1);
  const std::vector<double> x(w.values.size(), 1.0);
  EXPECT_NEAR(qn_weight(x, 1, w, 1.5, 1.0).weight, std::exp(w.values.back() - 0.5), 1e-12);
  EXPECT_THROW(qn_weight(x, 1, w, 1.5, 2.0), std::invalid_argument);
}

TEST(QnWeight, TiltConsistency) {
  for (int i = 0; i < 50; ++i) {
    const BrownianPath w = brownian(1.0, 0.01, 4, i, 2);
    const std::vector<double> lambda{0.7, -1.2};
    std::vector<double> x;
    for (std::size_t k = 0; k < w.grid.size(); ++k) x.insert(x.end(), lambda.begin(), lambda.end());
    const double budget = 0.49 + 1.44 + 1e-9;
    EXPECT_NEAR(qn_weight(x, 2, w, budget, 1.0).weight, exponential_tilt_weight(w, lambda, 1.0).weight,
                1e-12 * exponential_tilt_weight(w, lambda, 1.0).weight);
  }
}

TEST(QnWeight, NovikovMeanAndShiftedMoments) {
  const int n = 100000;
  const double budget = 2.0;
  const double t = 1.0;
  std::vector<double> weights(n), shifted(n), shifted2(n);
  for (int i = 0; i < n; ++i) {
    const BrownianPath w = brownian(t, 0.01, 5, i);
    std::vector<double> x(w.values.size());
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = 1.0 + std::sin(2.0 * w.values[k]);
    double tau = 0.0;
    const std::vector<double> xn = localized_integrand(x, 1, w.grid, budget, &tau);
    weights[i] = qn_weight(x, 1, w, budget, t).weight;
    const double s = shifted_brownian(w, xn).values.back();
    shifted[i] = s;
    shifted2[i] = s * s;
  }
  const McEstimate m = mean_of(weights);
  EXPECT_LE(std::abs(m.mean - 1.0), 3.0 * m.std_error);
  const McEstimate m1 = weighted_expectation(shifted, weights);
  EXPECT_LE(std::abs(m1.mean), 3.0 * m1.std_error) << m1.mean;
  const McEstimate m2 = weighted_expectation(shifted2, weights);
  EXPECT_LE(std::abs(m2.mean - t), 3.0 * m2.std_error) << m2.mean;
}

TEST(ShiftedBrownian, Examples) {
  const BrownianPath w = brownian(1.0, 0.1, 6, 0);
  const std::vector<double> zero(w.values.size(), 0.0);
  EXPECT_EQ(shifted_brownian(w, zero).values, w.values);

  BrownianPath one_step{make_grid(1.0, 1.0), 1, {0.0, 0.4}};
  const std::vector<double> ones(2, 1.0);
  EXPECT_DOUBLE_EQ(shifted_brownian(one_step, ones).values.back(), 0.4 - 1.0);
  EXPECT_THROW(shifted_brownian(w, ones), std::invalid_argument);
}

TEST(WeightedExpectation, Examples) {
  const std::vector<double> s{1.0, 2.0, 3.0};
  const std::vector<double> ones{1.0, 1.0, 1.0};
  const McEstimate m = weighted_expectation(s, ones);
  EXPECT_DOUBLE_EQ(m.mean, 2.0);
  EXPECT_DOUBLE_EQ(m.std_error, std::sqrt(2.0 / 3.0) / std::sqrt(3.0));
  EXPECT_EQ(m.n_paths, 3u);
  EXPECT_DOUBLE_EQ(m.ci_low(), 2.0 - 1.96 * m.std_error);
  EXPECT_DOUBLE_EQ(m.ci_high(), 2.0 + 1.96 * m.std_error);

  const McEstimate u = sample_mean(s);
  EXPECT_EQ(u.mean, m.mean);
  EXPECT_EQ(u.std_error, m.std_error);

  const std::vector<double> all_one{1.0, 1.0, 1.0, 1.0};
  const std::vector<double> w{0.5, 1.5, 2.0, 0.0};
  EXPECT_DOUBLE_EQ(weighted_expectation(all_one, w).mean, 1.0);
}

TEST(WeightedExpectation, Errors) {
  const std::vector<double> a{1.0, 2.0};
  const std::vector<double> b{1.0};
  EXPECT_THROW(weighted_expectation(a, b), std::invalid_argument);
  EXPECT_THROW(weighted_expectation(b, b), std::invalid_argument);
  const std::vector<double> negative{1.0, -1.0};
  EXPECT_THROW(weighted_expectation(a, negative), std::invalid_argument);
}

TEST(ExponentialTilt, BrownianUnderTiltedMeasure) {
  const int n = 100000;
  const double lambda = 0.8;
  const double t = 0.5;  // interior time, horizon 1
  const std::vector<double> l{lambda};
  std::vector<double> weights(n), wt(n), centered2(n);
  for (int i = 0; i < n; ++i) {
    const BrownianPath w = brownian(1.0, 0.05, 7, i);
    weights[i] = exponential_tilt_weight(w, l, 1.0).weight;
    const double x = w.interpolate(t)[0];
    wt[i] = x;
    centered2[i] = (x - lambda * t) * (x - lambda * t);
  }
  const McEstimate m1 = weighted_expectation(wt, weights);
  EXPECT_LE(std::abs(m1.mean - lambda * t), 3.0 * m1.std_error) << m1.mean;
  const McEstimate m2 = weighted_expectation(centered2, weights);
  EXPECT_LE(std::abs(m2.mean - t), 3.0 * m2.std_error) << m2.mean;
}
