#include "stochexp/girsanov.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "stochexp/stochastic_exponential.hpp"

namespace stochexp {

SdeSpec corollary2_transform(const SdeSpec& spec) {
  spec.validate();
  SdeSpec out = spec;
  const std::size_t d = spec.dim;
  out.drift = [drift = spec.drift, diffusion = spec.diffusion, d](const PathView& view, std::span<double> mu) {
    drift(view, mu);
    std::array<double, 16> small{};
    std::unique_ptr<double[]> large;
    double* sigma = small.data();
    if (d * d > small.size()) {
      large = std::make_unique<double[]>(d * d);
      sigma = large.get();
    }
    diffusion(view, {sigma, d * d});
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) mu[i] += sigma[i * d + j] * view.x[j];
  };
  return out;
}

TiltWeight exponential_tilt_weight(const BrownianPath& w_path, std::span<const double> lambda, double horizon,
                                   std::uint64_t path_index) {
  if (lambda.size() != w_path.dim) throw std::invalid_argument("exponential_tilt_weight: dimension mismatch");
  if (!(horizon >= 0.0)) throw std::invalid_argument("exponential_tilt_weight: negative horizon");
  const std::vector<double> w = w_path.interpolate(horizon);
  double dot = 0.0;
  double norm2 = 0.0;
  for (std::size_t c = 0; c < lambda.size(); ++c) {
    dot += lambda[c] * w[c];
    norm2 += lambda[c] * lambda[c];
  }
  return {path_index, std::exp(dot - 0.5 * norm2 * horizon)};
}

TiltWeight qn_weight(std::span<const double> x_states, std::size_t dim, const BrownianPath& w_path,
                     double budget, double horizon, std::uint64_t path_index) {
  if (horizon > w_path.grid.back() * (1.0 + 1e-12))
    throw std::invalid_argument("qn_weight: horizon beyond the grid");
  const ExponentialPath z = localized_exponential(x_states, dim, w_path, budget);
  return {path_index, std::exp(z.log_z_at(horizon))};
}

BrownianPath shifted_brownian(const BrownianPath& w_path, std::span<const double> x_states) {
  const std::size_t d = w_path.dim;
  if (x_states.size() != w_path.values.size())
    throw std::invalid_argument("shifted_brownian: integrand and Brownian path grids differ");
  BrownianPath out = w_path;
  std::vector<double> drift(d, 0.0);
  for (std::size_t k = 0; k + 1 < w_path.grid.size(); ++k) {
    const double dt = w_path.grid.step(k);
    for (std::size_t c = 0; c < d; ++c) {
      drift[c] += x_states[k * d + c] * dt;
      out.values[(k + 1) * d + c] -= drift[c];
    }
  }
  return out;
}

McEstimate weighted_expectation(std::span<const double> samples, std::span<const double> weights) {
  if (samples.size() != weights.size())
    throw std::invalid_argument("weighted_expectation: length mismatch");
  const std::size_t n = samples.size();
  if (n < 2) throw std::invalid_argument("weighted_expectation: need at least two samples");
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i] < 0.0) throw std::invalid_argument("weighted_expectation: negative weight");
    sum += weights[i] * samples[i];
  }
  const double mean = sum / static_cast<double>(n);
  double m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double delta = weights[i] * samples[i] - mean;
    m2 += delta * delta;
  }
  // Population (1/n) variance of the weighted samples.
  const double variance = m2 / static_cast<double>(n);
  return {mean, std::sqrt(variance / static_cast<double>(n)), n};
}

McEstimate sample_mean(std::span<const double> samples) {
  const std::vector<double> ones(samples.size(), 1.0);
  return weighted_expectation(samples, ones);
}

}  // namespace stochexp
