#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace stochexp {

/// Strictly increasing time points starting at 0.
class TimeGrid {
 public:
  TimeGrid() = default;

  /// Validates: non-empty, starts at 0, strictly increasing, last point <= horizon.
  /// `base_step` is the nominal step bound recorded with the grid; 0 means "max gap".
  static TimeGrid from_times(std::vector<double> times, double horizon, double base_step = 0.0);

  std::span<const double> times() const noexcept { return times_; }
  double operator[](std::size_t k) const noexcept { return times_[k]; }
  std::size_t size() const noexcept { return times_.size(); }
  std::size_t steps() const noexcept { return times_.empty() ? 0 : times_.size() - 1; }
  double step(std::size_t k) const noexcept { return times_[k + 1] - times_[k]; }
  double horizon() const noexcept { return horizon_; }
  double base_step() const noexcept { return base_step_; }
  double back() const noexcept { return times_.back(); }

  /// Largest index k with times[k] <= t (relative slack 1e-12); npos when t < 0.
  std::size_t index_at_or_before(double t) const noexcept;
  /// Index of a grid point equal to t within 1e-12 relative, npos otherwise.
  std::size_t find(double t) const noexcept;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  std::vector<double> times_;
  double horizon_ = 0.0;
  double base_step_ = 0.0;
};

/// Uniform grid of step `base_step` ending exactly at `horizon`; the final step may be
/// shorter. Throws std::invalid_argument on non-positive arguments or base_step > horizon.
TimeGrid make_grid(double horizon, double base_step);

}  // namespace stochexp
