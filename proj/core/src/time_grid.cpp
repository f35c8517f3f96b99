#include "stochexp/time_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace stochexp {

namespace {
inline double slack(double t) { return 1e-12 * std::max(1.0, std::abs(t)); }
}  // namespace

TimeGrid TimeGrid::from_times(std::vector<double> times, double horizon, double base_step) {
  if (times.empty()) throw std::invalid_argument("TimeGrid: empty time sequence");
  if (times.front() != 0.0) throw std::invalid_argument("TimeGrid: first time must be 0");
  if (!(horizon > 0.0) && !(times.size() == 1 && horizon >= 0.0))
    throw std::invalid_argument("TimeGrid: horizon must be positive");
  double max_gap = 0.0;
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double gap = times[k] - times[k - 1];
    if (!(gap > 0.0))
      throw std::invalid_argument("TimeGrid: times not strictly increasing at index " +
                                  std::to_string(k));
    max_gap = std::max(max_gap, gap);
  }
  if (times.back() > horizon + slack(horizon))
    throw std::invalid_argument("TimeGrid: last time exceeds horizon");
  TimeGrid grid;
  grid.times_ = std::move(times);
  grid.horizon_ = horizon;
  grid.base_step_ = base_step > 0.0 ? base_step : max_gap;
  return grid;
}

std::size_t TimeGrid::index_at_or_before(double t) const noexcept {
  if (times_.empty() || t < -slack(t)) return npos;
  const auto it = std::upper_bound(times_.begin(), times_.end(), t + slack(t));
  return static_cast<std::size_t>(it - times_.begin()) - 1;
}

std::size_t TimeGrid::find(double t) const noexcept {
  const std::size_t k = index_at_or_before(t);
  if (k == npos) return npos;
  return std::abs(times_[k] - t) <= slack(t) ? k : npos;
}

TimeGrid make_grid(double horizon, double base_step) {
  if (!(horizon > 0.0) || !(base_step > 0.0) || !std::isfinite(horizon))
    throw std::invalid_argument("make_grid: horizon and base_step must be positive");
  if (base_step > horizon * (1.0 + 1e-12))
    throw std::invalid_argument("make_grid: base_step exceeds horizon");

  const auto full_steps = static_cast<std::size_t>(std::floor(horizon / base_step * (1.0 + 1e-12)));
  std::vector<double> times;
  times.reserve(full_steps + 2);
  for (std::size_t k = 0; k <= full_steps; ++k) times.push_back(static_cast<double>(k) * base_step);
  // A sliver shorter than 1e-9 of a step is merged into the last full step.
  if (horizon - times.back() <= 1e-9 * base_step)
    times.back() = horizon;
  else
    times.push_back(horizon);
  if (times.size() == 1) times.push_back(horizon);
  return TimeGrid::from_times(std::move(times), horizon, base_step);
}

}  // namespace stochexp
