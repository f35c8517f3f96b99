#pragma once

#include <functional>
#include <string>
#include <vector>

namespace stochexp {

/// dX = b(X) dt + sigma(X) dW on the real line.
struct Diffusion1D {
  std::function<double(double)> drift;
  std::function<double(double)> sigma;
  /// Reference point c of the scale function.
  double reference = 0.0;
};

enum class Boundary { plus, minus };
enum class VStatus { finite, infinite, indeterminate };
enum class ExplosionClass { no_explosion, explodes_plus, explodes_minus, explodes_both, indeterminate };

const char* to_string(VStatus status) noexcept;
const char* to_string(ExplosionClass cls) noexcept;

struct FellerOptions {
  /// Relative size of the last truncation increment required to call v finite.
  double tolerance = 1e-6;
  /// Truncation points are c +/- 2^k, k = 0 .. max_doublings at least.
  int max_doublings = 20;
  /// Further doublings allowed while the tail still decays but has not settled.
  int max_extensions = 40;
  /// Partial values above this are declared divergent.
  double divergence_budget = 1e12;
  /// Tail increments shrinking by at least this ratio count as decaying.
  double decay_ratio = 0.75;
  /// Tail increments shrinking by less than this ratio count as non-decaying.
  double stall_ratio = 0.95;
};

/// Feller's v(+-inf) together with the evidence behind the finite/infinite call.
struct VResult {
  VStatus status = VStatus::indeterminate;
  /// Partial value at the last truncation examined (+inf on overflow).
  double value = 0.0;
  std::vector<double> truncations;
  std::vector<double> partial_values;
  std::string reason;

  bool finite() const noexcept { return status == VStatus::finite; }
};

struct FellerReport {
  VResult v_plus;
  VResult v_minus;
  ExplosionClass classification = ExplosionClass::indeterminate;
};

/// s'(x) = exp(-int_c^x 2 b / sigma^2). Throws std::domain_error when sigma vanishes
/// (or is not finite) at a probed point.
double scale_density(const Diffusion1D& diffusion, double x);

/// v(+-inf) = int_c^{+-inf} s'(y) int_c^y 2 / (s'(z) sigma(z)^2) dz dy, evaluated on the
/// geometric truncation schedule. The inner integral is carried across the mesh in the
/// form g(y) = int_c^y 2 exp(-(S(y) - S(z))) / sigma(z)^2 dz so neither s' nor 1/s' is
/// ever formed on its own.
VResult feller_v(const Diffusion1D& diffusion, Boundary boundary, const FellerOptions& options = {});
VResult feller_v(const Diffusion1D& diffusion, Boundary boundary, double tolerance);

/// Explosion is possible through each side whose v is finite.
FellerReport classify_explosion(const Diffusion1D& diffusion, const FellerOptions& options = {});
FellerReport classify_explosion(const Diffusion1D& diffusion, double tolerance);

}  // namespace stochexp
