#include "stochexp/stochastic_exponential.hpp"

#include <cmath>
#include <stdexcept>

namespace stochexp {

double ExponentialPath::z(std::size_t k) const noexcept { return std::exp(log_z[k]); }

double ExponentialPath::log_z_at(double t) const {
  const std::size_t k = grid.index_at_or_before(t);
  if (k == TimeGrid::npos) throw std::invalid_argument("ExponentialPath: time before grid start");
  return log_z[k];
}

ExponentialPath stochastic_exponential(std::span<const double> x_states, std::size_t dim,
                                       const BrownianPath& w_path, double stop_time,
                                       const ExponentialOptions& options) {
  const std::size_t n = w_path.grid.size();
  if (dim == 0 || dim != w_path.dim || x_states.size() != n * dim)
    throw std::invalid_argument("stochastic_exponential: integrand and Brownian path grids differ");
  if (!(stop_time >= 0.0)) throw std::invalid_argument("stochastic_exponential: negative stop time");

  ExponentialPath out;
  out.grid = w_path.grid;
  out.stop_time = stop_time;
  out.log_z.assign(n, 0.0);
  out.ito_integral.assign(n, 0.0);
  out.m_integral.assign(n, 0.0);

  double ito = 0.0;
  double energy = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (!out.zero_flag && out.grid[k] < stop_time) {
      const double dt = out.grid.step(k);
      double ito_step = 0.0;
      double energy_step = 0.0;
      for (std::size_t c = 0; c < dim; ++c) {
        const double xc = x_states[k * dim + c];
        ito_step += xc * (w_path.value(k + 1, c) - w_path.value(k, c));
        energy_step += xc * xc;
      }
      const double next_energy = energy + energy_step * dt;
      if (next_energy > options.divergence_budget || !std::isfinite(next_energy) ||
          !std::isfinite(ito_step)) {
        out.zero_flag = true;
        out.zero_index = k + 1;
      } else {
        ito += ito_step;
        energy = next_energy;
      }
    }
    out.ito_integral[k + 1] = ito;
    out.m_integral[k + 1] = energy;
    out.log_z[k + 1] = out.zero_flag ? -HUGE_VAL : ito - 0.5 * energy;
  }
  return out;
}

ExponentialPath stochastic_exponential(const SolutionPath& solution, const ExponentialOptions& options) {
  const double stop = solution.exploded() ? solution.eta_estimate : HUGE_VAL;
  return stochastic_exponential(solution.states, solution.dim, solution.driving_brownian, stop, options);
}

std::vector<double> localized_integrand(std::span<const double> x_states, std::size_t dim,
                                        const TimeGrid& grid, double budget, double* tau_out) {
  if (!(budget > 0.0)) throw std::invalid_argument("localized_integrand: budget must be positive");
  const std::vector<double> energy = left_endpoint_energy(grid, x_states, dim);
  const double tau = budget_time(grid, energy, budget);
  std::vector<double> masked(x_states.begin(), x_states.end());
  for (std::size_t k = 0; k < grid.size(); ++k)
    if (!(grid[k] < tau))
      for (std::size_t c = 0; c < dim; ++c) masked[k * dim + c] = 0.0;
  if (tau_out) *tau_out = tau;
  return masked;
}

ExponentialPath localized_exponential(std::span<const double> x_states, std::size_t dim,
                                      const BrownianPath& w_path, double budget,
                                      const ExponentialOptions& options) {
  if (x_states.size() != w_path.grid.size() * dim || dim != w_path.dim)
    throw std::invalid_argument("localized_exponential: integrand and Brownian path grids differ");
  double tau = HUGE_VAL;
  const std::vector<double> masked = localized_integrand(x_states, dim, w_path.grid, budget, &tau);
  ExponentialPath out = stochastic_exponential(masked, dim, w_path, HUGE_VAL, options);
  out.stop_time = tau;
  return out;
}

}  // namespace stochexp
