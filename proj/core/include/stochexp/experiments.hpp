#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stochexp/brownian.hpp"
#include "stochexp/feller.hpp"
#include "stochexp/report.hpp"
#include "stochexp/sde.hpp"

namespace stochexp {

/// Seeding and parallelism shared by all scenarios. Reports do not depend on `jobs`.
struct RunContext {
  std::uint64_t master_seed = 0;
  std::size_t jobs = 1;
};

// Stream ids keep the scenarios' random numbers disjoint for a given master seed.
namespace streams {
inline constexpr std::uint64_t corollary2_original = 1;
inline constexpr std::uint64_t corollary2_transformed = 2;
inline constexpr std::uint64_t nonunique = 3;
inline constexpr std::uint64_t nonexist = 4;
inline constexpr std::uint64_t tanaka = 5;
inline constexpr std::uint64_t integrability = 6;
inline constexpr std::uint64_t simulate = 7;
}  // namespace streams

// ---------------------------------------------------------------------------------------
// E[Z_X(T)] for dX = |X|^alpha dt + dW against survival of dX = (|X|^alpha + X) dt + dW.

struct Corollary2Params {
  double alpha = 4.0;
  double x0 = 0.0;
  double horizon = 1.0;
  std::size_t n_paths = 10000;
  SolveConfig config{};
};

/// Throws std::invalid_argument for alpha <= 3, std::runtime_error when the Feller gate
/// does not classify both drifts as explodes_plus.
ScenarioReport run_corollary2_gap(const Corollary2Params& params, const RunContext& ctx = {});

// ---------------------------------------------------------------------------------------
// Exponential tilts P^lambda all qualify as candidate measures.

struct NonuniquenessParams {
  std::vector<double> lambdas{-1.0, 0.0, 1.0};
  double horizon = 1.0;
  std::size_t n_paths = 10000;
  double base_step = 1e-3;
};

ScenarioReport run_candidate_nonuniqueness(const NonuniquenessParams& params, const RunContext& ctx = {});

// ---------------------------------------------------------------------------------------
// X(t) = f(W(t)) / (T - t) with f(x) = 1 + 1 / (1 + e^-x): W - int X du -> -inf.

struct NonexistenceParams {
  double horizon = 1.0;
  std::vector<double> epsilons;  // decreasing, each < horizon; empty means 2^-4 .. 2^-14
  std::size_t n_paths = 1000;
  double base_step = 1e-3;
};

double nonexistence_f(double x) noexcept;

/// Grid for the scenario: uniform base points, the points T - eps, and geometric points
/// T - T 2^(-j/2) accumulating at T, ending at T.
TimeGrid nonexistence_grid(double horizon, std::span<const double> epsilons, double base_step);

/// W(T - eps) - int_0^{T-eps} f(W(u)) / (T - u) du for each eps, with the product rule
/// f(W(t_k)) log((T - t_k) / (T - t_{k+1})) on every grid step. Each T - eps must be a
/// grid point.
std::vector<double> compute_wqc(const BrownianPath& w, double horizon, std::span<const double> epsilons);

ScenarioReport run_candidate_nonexistence(const NonexistenceParams& params, const RunContext& ctx = {});

// ---------------------------------------------------------------------------------------
// Tanaka's equation dX = sgn(X) dW.

struct TanakaParams {
  double horizon = 1.0;
  std::size_t n_paths = 10000;
  double base_step = 1e-3;
  /// Residual bound C sqrt(base_step).
  double residual_constant = 12.0;
};

struct TanakaResiduals {
  double direct = 0.0;  // max_k |X_k - X_0 - sum_{j<k} sgn(X_j) dW_j|
  double mirror = 0.0;  // same for (-X, W)
};

/// W_k = sum_{j<k} sgn(X_j) (X_{j+1} - X_j), sgn(0) = -1.
BrownianPath tanaka_driver(const BrownianPath& x);
TanakaResiduals tanaka_residuals(const BrownianPath& x, const BrownianPath& w);

ScenarioReport run_tanaka(const TanakaParams& params, const RunContext& ctx = {});

// ---------------------------------------------------------------------------------------
// dX = |X|^alpha dt + dW explodes, yet int_0^eta X^2 < inf and Z_X(eta) > 0.

struct IntegrabilityParams {
  double alpha = 4.0;
  double x0 = 0.0;
  double horizon = 20.0;
  std::size_t n_paths = 10000;
  SolveConfig config{};
  /// Coarse explosion threshold for the tail-stability comparison; config.x_max is the fine one.
  double coarse_x_max = 1e4;
};

ScenarioReport run_integrability_check(const IntegrabilityParams& params, const RunContext& ctx = {});

// ---------------------------------------------------------------------------------------
// Generic scalar simulation and Feller classification of catalog coefficients.

struct SimulationParams {
  std::string drift = "zero";
  std::string diffusion = "constant:1";
  double x0 = 0.0;
  double horizon = 1.0;
  std::size_t n_paths = 10000;
  SolveConfig config{};
};

ScenarioReport run_simulation(const SimulationParams& params, const RunContext& ctx = {});

struct FellerParams {
  std::string drift = "zero";
  std::string diffusion = "constant:1";
  double reference = 0.0;
  FellerOptions options{};
};

ScenarioReport run_feller_classification(const FellerParams& params, const RunContext& ctx = {});

/// Empirical quantile with linear interpolation between order statistics.
double empirical_quantile(std::vector<double> values, double q);

}  // namespace stochexp
