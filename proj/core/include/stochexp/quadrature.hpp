#pragma once

#include <cstddef>
#include <functional>

namespace stochexp {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  std::size_t intervals = 0;
  bool converged = false;
  /// False when the integrand produced inf or NaN; value is then +inf (or NaN).
  bool finite = true;
};

struct QuadOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  std::size_t max_intervals = 2000;
};

/// Globally adaptive Gauss-Kronrod (7, 15) quadrature: the interval with the largest
/// error estimate is bisected until the total error meets max(abs_tol, rel_tol |I|).
/// Error estimates follow QUADPACK's QK15. a > b integrates with the sign flipped.
QuadResult integrate(const std::function<double(double)>& f, double a, double b, const QuadOptions& options = {});

}  // namespace stochexp
