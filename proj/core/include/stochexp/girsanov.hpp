#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "stochexp/brownian.hpp"
#include "stochexp/sde.hpp"

namespace stochexp {

/// Radon-Nikodym density of one path, evaluated at the horizon.
struct TiltWeight {
  std::uint64_t path_index = 0;
  double weight = 1.0;
};

/// Monte Carlo mean with its standard error and a normal 95% interval.
struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_paths = 0;

  double ci_low() const noexcept { return mean - 1.96 * std_error; }
  double ci_high() const noexcept { return mean + 1.96 * std_error; }
};

/// drift + diffusion * x, same diffusion and initial value.
SdeSpec corollary2_transform(const SdeSpec& spec);

/// exp(lambda . W(T) - |lambda|^2 T / 2). W(T) is linearly interpolated between
/// grid points; T beyond the grid throws std::invalid_argument.
TiltWeight exponential_tilt_weight(const BrownianPath& w_path, std::span<const double> lambda, double horizon,
                                   std::uint64_t path_index = 0);

/// Z_{X_N}(T), the density of Q_N on F_T.
TiltWeight qn_weight(std::span<const double> x_states, std::size_t dim, const BrownianPath& w_path,
                     double budget, double horizon, std::uint64_t path_index = 0);

/// W(t) - int_0^t X(u) du with the left-endpoint rule.
BrownianPath shifted_brownian(const BrownianPath& w_path, std::span<const double> x_states);

/// Plain (unnormalized) importance-weighted mean sum(w_i s_i) / n with standard error
/// sd(w_i s_i) / sqrt(n). Throws std::invalid_argument on length mismatch or n < 2.
McEstimate weighted_expectation(std::span<const double> samples, std::span<const double> weights);
/// Unweighted sample mean and standard error.
McEstimate sample_mean(std::span<const double> samples);

}  // namespace stochexp
