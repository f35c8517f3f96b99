#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stochexp/rng.hpp"
#include "stochexp/time_grid.hpp"

namespace stochexp {

/// d-dimensional path sampled on a grid; values are stored row-major (point, coordinate).
struct BrownianPath {
  TimeGrid grid;
  std::size_t dim = 1;
  std::vector<double> values;

  std::span<const double> at_index(std::size_t k) const noexcept {
    return {values.data() + k * dim, dim};
  }
  double value(std::size_t k, std::size_t coord = 0) const noexcept { return values[k * dim + coord]; }
  /// Linear interpolation between grid points; throws std::invalid_argument beyond the grid.
  std::vector<double> interpolate(double t) const;
};

/// Independent N(0, dt I_d) increments drawn in (step, coordinate) order from `stream`.
/// Throws std::invalid_argument when dim == 0.
BrownianPath sample_brownian(const TimeGrid& grid, RngStream& stream, std::size_t dim);

/// Conditional sampling of a Brownian motion inside one interval whose endpoint value is
/// already fixed. Each call advances the current time by `h` and returns the increment;
/// the last call (h equal to the remaining time) lands exactly on the endpoint value.
class BridgeSampler {
 public:
  BridgeSampler(double length, std::span<const double> endpoint_increment, RngStream& stream);

  /// Starts a new interval, reusing storage.
  void reset(double length, std::span<const double> endpoint_increment);

  double remaining() const noexcept { return remaining_; }
  bool closed() const noexcept { return remaining_ == 0.0; }

  /// Writes W(t+h) - W(t) into `increment`. `h` is clamped to the remaining time.
  /// Returns the time actually advanced.
  double advance(double h, std::span<double> increment);

 private:
  double remaining_;
  std::vector<double> gap_;  // W(end) - W(current)
  RngStream* stream_;
};

/// Fills every point of `fine` not in `coarse.grid` by Brownian bridge interpolation, so
/// coarse values are reproduced exactly at shared points. `fine` must contain all coarse
/// points; throws std::invalid_argument otherwise.
BrownianPath refine_brownian(const BrownianPath& coarse, const TimeGrid& fine, RngStream& stream);

}  // namespace stochexp
