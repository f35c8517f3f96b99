#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "stochexp/brownian.hpp"
#include "stochexp/sde.hpp"
#include "stochexp/time_grid.hpp"

namespace stochexp {

struct ExponentialOptions {
  /// Running energy above this level is treated as divergence: Z is reported as 0.
  double divergence_budget = 1e6;
};

/// Discretized Z_X(t) = exp(int_0^t X dW - 1/2 int_0^t |X|^2 du), kept in log space.
///
/// Step k contributes iff t_k < stop_time. Outside the zero convention
/// log_z[k] == ito_integral[k] - m_integral[k] / 2; once zero_flag is raised at
/// index zero_index, log_z is -inf from there on and both integrals are frozen.
struct ExponentialPath {
  TimeGrid grid;
  std::vector<double> log_z;
  std::vector<double> ito_integral;
  std::vector<double> m_integral;
  bool zero_flag = false;
  std::size_t zero_index = std::numeric_limits<std::size_t>::max();
  double stop_time = std::numeric_limits<double>::infinity();

  double z(std::size_t k) const noexcept;
  double final_log_z() const noexcept { return log_z.back(); }
  /// Value at the last grid point not after t.
  double log_z_at(double t) const;
};

/// Left-endpoint Ito sums of X against W on their shared grid, frozen at stop_time.
/// Throws std::invalid_argument when x and w do not share a grid or stop_time < 0.
ExponentialPath stochastic_exponential(std::span<const double> x_states, std::size_t dim,
                                       const BrownianPath& w_path, double stop_time,
                                       const ExponentialOptions& options = {});

/// Z_X stopped at the explosion estimate (or never, for paths that did not explode).
ExponentialPath stochastic_exponential(const SolutionPath& solution, const ExponentialOptions& options = {});

/// X_N(t_k) = X(t_k) when t_k < tau_N, 0 afterwards; tau_N = budget_time of the
/// left-endpoint energy of `x_states`.
std::vector<double> localized_integrand(std::span<const double> x_states, std::size_t dim,
                                        const TimeGrid& grid, double budget, double* tau_out = nullptr);

/// Z_{X_N}: exponential of the localized integrand; stop_time records tau_N.
ExponentialPath localized_exponential(std::span<const double> x_states, std::size_t dim,
                                      const BrownianPath& w_path, double budget,
                                      const ExponentialOptions& options = {});

}  // namespace stochexp
