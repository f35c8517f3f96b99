#include "stochexp/sde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stochexp {

namespace {

double sup_norm(std::span<const double> v) noexcept {
  double m = 0.0;
  for (double x : v) {
    if (!std::isfinite(x)) return HUGE_VAL;
    m = std::max(m, std::abs(x));
  }
  return m;
}

double squared_norm(std::span<const double> v) noexcept {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

struct Recorder {
  std::size_t dim;
  std::vector<double> times;
  std::vector<double> states;
  std::vector<double> w;
  std::vector<double> m;

  void push(double t, std::span<const double> x, std::span<const double> wv, double mv) {
    times.push_back(t);
    states.insert(states.end(), x.begin(), x.end());
    w.insert(w.end(), wv.begin(), wv.end());
    m.push_back(mv);
  }
};

}  // namespace

Functional markov(std::function<void(double, std::span<const double>, std::span<double>)> rule) {
  return [rule = std::move(rule)](const PathView& view, std::span<double> out) { rule(view.t, view.x, out); };
}

Functional scalar(std::function<double(double)> f) {
  return [f = std::move(f)](const PathView& view, std::span<double> out) { out[0] = f(view.x[0]); };
}

void SdeSpec::validate() const {
  if (dim == 0) throw std::invalid_argument("SdeSpec: dimension must be positive");
  if (x0.size() != dim) throw std::invalid_argument("SdeSpec: x0 size does not match dimension");
  if (!drift || !diffusion) throw std::invalid_argument("SdeSpec: drift and diffusion are required");
}

void SolveConfig::validate() const {
  if (!(base_step > 0.0) || !(x_max > 0.0) || !(kappa > 0.0) || max_substeps < 1)
    throw std::invalid_argument("SolveConfig: parameters must be positive");
}

SolutionPath solve(const SdeSpec& spec, const SolveConfig& config, const RngStream& stream,
                   double horizon) {
  spec.validate();
  config.validate();
  const TimeGrid base = make_grid(horizon, config.base_step);
  const std::size_t d = spec.dim;

  RngStream base_rng = stream;
  RngStream bridge_rng = stream.with_lane(stream.lane() + 1);

  Recorder rec{d, {}, {}, {}, {}};
  rec.times.reserve(base.size());
  rec.states.reserve(base.size() * d);
  rec.w.reserve(base.size() * d);
  rec.m.reserve(base.size());

  std::vector<double> x = spec.x0;
  std::vector<double> w(d, 0.0);
  std::vector<double> mu(d), sigma(d * d), dw(d), dw_base(d);
  double m = 0.0;
  rec.push(0.0, x, w, m);

  SolutionPath out;
  out.dim = d;
  auto finish = [&](SolveStatus status) {
    out.status = status;
    out.grid = TimeGrid::from_times(std::move(rec.times), horizon, config.base_step);
    out.driving_brownian = BrownianPath{out.grid, d, std::move(rec.w)};
    out.states = std::move(rec.states);
    out.m_values = std::move(rec.m);
    if (status == SolveStatus::exploded) out.eta_estimate = out.grid.back();
    return out;
  };

  if (sup_norm(x) >= config.x_max) return finish(SolveStatus::exploded);

  BridgeSampler bridge(1.0, dw_base, bridge_rng);
  bool current_recorded = true;
  double t = 0.0;

  for (std::size_t k = 0; k + 1 < base.size(); ++k) {
    const double a = base[k];
    const double b = base[k + 1];
    const double dt = b - a;
    const double sqrt_dt = std::sqrt(dt);
    for (std::size_t c = 0; c < d; ++c) dw_base[c] = sqrt_dt * base_rng.normal();

    double remaining = dt;
    bool bridged = false;
    std::size_t substeps = 0;
    while (remaining > 0.0) {
      const std::size_t history = rec.times.size() - (current_recorded ? 1 : 0);
      const PathView view{{rec.times.data(), history}, {rec.states.data(), history * d}, d, t, x};
      spec.drift(view, mu);
      spec.diffusion(view, sigma);

      const double drift_size = sup_norm(mu);
      const double local = std::min(config.base_step,
                                    config.kappa * (1.0 + sup_norm(x)) / (1.0 + drift_size));
      double h = 0.0;
      if (!bridged && local >= remaining) {
        h = remaining;
        std::copy(dw_base.begin(), dw_base.end(), dw.begin());
        remaining = 0.0;
      } else {
        if (!bridged) {
          bridge.reset(dt, dw_base);
          bridged = true;
        }
        h = bridge.advance(std::min(local, remaining), dw);
        remaining = bridge.remaining();
      }
      ++substeps;

      m += squared_norm(x) * h;
      for (std::size_t i = 0; i < d; ++i) {
        double diffusion_term = 0.0;
        for (std::size_t j = 0; j < d; ++j) diffusion_term += sigma[i * d + j] * dw[j];
        x[i] += mu[i] * h + diffusion_term;
        w[i] += dw[i];
      }
      if (drift_size == HUGE_VAL) std::fill(x.begin(), x.end(), HUGE_VAL);

      const double t_new = remaining == 0.0 ? b : a + (dt - remaining);
      const double last = rec.times.back();
      const bool exploded = sup_norm(x) >= config.x_max;
      const bool limit = remaining > 0.0 && substeps >= config.max_substeps;
      if (t_new > last && (t_new < b || remaining == 0.0)) {
        rec.push(t_new, x, w, m);
        current_recorded = true;
        t = t_new;
      } else if (exploded || limit) {
        // Sub-resolution steps: stamp the state one ulp after the last recorded time.
        t = std::nextafter(last, HUGE_VAL);
        rec.push(t, x, w, m);
        current_recorded = true;
      } else {
        current_recorded = false;
        t = t_new;
      }
      out.max_substeps_used = std::max(out.max_substeps_used, substeps);
      if (exploded) return finish(SolveStatus::exploded);
      if (limit) return finish(SolveStatus::step_limit_hit);
    }
  }
  return finish(SolveStatus::completed);
}

double explosion_time_estimate(const SolutionPath& partial, double alpha) {
  if (!(alpha > 1.0)) throw std::invalid_argument("explosion_time_estimate: alpha must exceed 1");
  if (!partial.exploded()) throw std::invalid_argument("explosion_time_estimate: path did not explode");
  const double x_last = sup_norm(partial.state(partial.grid.size() - 1));
  const double tail = std::isfinite(x_last) ? std::pow(x_last, 1.0 - alpha) / (alpha - 1.0) : 0.0;
  return partial.grid.back() + tail;
}

double budget_time(const TimeGrid& grid, std::span<const double> m_values, double budget) {
  if (m_values.size() != grid.size()) throw std::invalid_argument("budget_time: size mismatch");
  for (std::size_t k = 0; k < m_values.size(); ++k) {
    if (m_values[k] < budget) continue;
    if (k == 0) return grid[0];
    const double rise = m_values[k] - m_values[k - 1];
    const double frac = rise > 0.0 ? (budget - m_values[k - 1]) / rise : 1.0;
    return grid[k - 1] + std::clamp(frac, 0.0, 1.0) * grid.step(k - 1);
  }
  return std::numeric_limits<double>::infinity();
}

double budget_time(const SolutionPath& solution, double budget) {
  return budget_time(solution.grid, solution.m_values, budget);
}

std::vector<double> left_endpoint_energy(const TimeGrid& grid, std::span<const double> states,
                                         std::size_t dim) {
  if (dim == 0 || states.size() != grid.size() * dim)
    throw std::invalid_argument("left_endpoint_energy: states do not match the grid");
  std::vector<double> m(grid.size(), 0.0);
  for (std::size_t k = 0; k + 1 < grid.size(); ++k)
    m[k + 1] = m[k] + squared_norm(states.subspan(k * dim, dim)) * grid.step(k);
  return m;
}

}  // namespace stochexp
