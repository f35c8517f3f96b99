#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "stochexp/brownian.hpp"
#include "stochexp/rng.hpp"
#include "stochexp/time_grid.hpp"

namespace stochexp {

/// What a functional may look at: the recorded history strictly before the current
/// point, plus the current (t, x). Nothing after t is reachable, which makes every
/// Functional progressively measurable by construction.
struct PathView {
  std::span<const double> times;
  std::span<const double> states;  // row-major, `dim` entries per recorded time
  std::size_t dim = 1;
  double t = 0.0;
  std::span<const double> x;
};

/// Writes a d-vector (drift) or a row-major d x d matrix (diffusion) into `out`.
using Functional = std::function<void(const PathView&, std::span<double> out)>;

/// Lifts a Markov rule f(t, x, out) to a Functional.
Functional markov(std::function<void(double, std::span<const double>, std::span<double>)> rule);
/// Scalar, time-homogeneous coefficient x -> f(x) (dimension 1).
Functional scalar(std::function<double(double)> f);

/// dX = drift(X, t) dt + diffusion(X, t) dW with X and W of the same dimension.
struct SdeSpec {
  std::size_t dim = 1;
  Functional drift;
  Functional diffusion;
  std::vector<double> x0;

  /// Throws std::invalid_argument when dim is 0, x0 has the wrong size or a
  /// coefficient is missing.
  void validate() const;
};

struct SolveConfig {
  double base_step = 1e-3;
  /// Explosion is declared once the sup-norm of the state reaches this level.
  double x_max = 1e6;
  /// Local step is min(base_step, kappa (1 + |x|) / (1 + |drift|)), sup-norms.
  double kappa = 1e-2;
  std::size_t max_substeps = 100000;

  void validate() const;
};

enum class SolveStatus { completed, exploded, step_limit_hit };

struct SolutionPath {
  TimeGrid grid;
  std::size_t dim = 1;
  std::vector<double> states;    // row-major
  std::vector<double> m_values;  // M_X(t) = int_0^t |X(u)|^2 du, left-endpoint rule
  BrownianPath driving_brownian;
  SolveStatus status = SolveStatus::completed;
  /// Estimated explosion time (last grid time) when exploded, +inf otherwise.
  double eta_estimate = std::numeric_limits<double>::infinity();
  /// Largest number of substeps taken inside one base step.
  std::size_t max_substeps_used = 0;

  std::span<const double> state(std::size_t k) const noexcept { return {states.data() + k * dim, dim}; }
  bool exploded() const noexcept { return status == SolveStatus::exploded; }
};

/// Euler-Maruyama with left-endpoint coefficients and drift-adaptive substeps.
///
/// The driving Brownian motion is drawn on the uniform base grid from `stream`
/// (lane 0); substeps inside a base step are filled by Brownian bridge sampling from
/// lane 1 of the same stream, so base-grid values do not depend on the adaptive
/// schedule. Steps too small to move the time stamp are merged into the next
/// recorded point. Stops with status exploded when |X|_inf >= x_max (or X is not
/// finite), with step_limit_hit when a base step needs more than max_substeps.
SolutionPath solve(const SdeSpec& spec, const SolveConfig& config, const RngStream& stream,
                   double horizon);

/// t_last + |X_last|^(1 - alpha) / (alpha - 1): remaining blow-up time of dx = x^alpha dt
/// from the last recorded state. Throws std::invalid_argument if alpha <= 1 or the path
/// did not explode.
double explosion_time_estimate(const SolutionPath& partial, double alpha);

/// First time the running energy reaches `budget`, linearly interpolated inside the
/// crossing step; +inf if it is never reached on the grid.
double budget_time(const TimeGrid& grid, std::span<const double> m_values, double budget);
double budget_time(const SolutionPath& solution, double budget);

/// Left-endpoint running energy sum_{j<k} |X_j|^2 dt_j on the grid.
std::vector<double> left_endpoint_energy(const TimeGrid& grid, std::span<const double> states,
                                         std::size_t dim);

}  // namespace stochexp
