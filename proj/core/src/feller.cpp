#include "stochexp/feller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stochexp/quadrature.hpp"

namespace stochexp {

const char* to_string(VStatus status) noexcept {
  switch (status) {
    case VStatus::finite: return "finite";
    case VStatus::infinite: return "infinite";
    case VStatus::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

const char* to_string(ExplosionClass cls) noexcept {
  switch (cls) {
    case ExplosionClass::no_explosion: return "no_explosion";
    case ExplosionClass::explodes_plus: return "explodes_plus";
    case ExplosionClass::explodes_minus: return "explodes_minus";
    case ExplosionClass::explodes_both: return "explodes_both";
    case ExplosionClass::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

namespace {

// exp(-50) is far below every tolerance used here.
constexpr double kWindowExponent = 50.0;

const QuadOptions kExponentQuad{1e-13, 0.0, 200};
const QuadOptions kInnerQuad{1e-11, 0.0, 400};
const QuadOptions kOuterQuad{1e-10, 0.0, 400};

/// Evaluates the v-function towards +inf. The minus side is handled by reflecting the
/// diffusion (x -> -x) before constructing this.
class PlusSideV {
 public:
  explicit PlusSideV(Diffusion1D diffusion) : diff_(std::move(diffusion)) {}

  double sigma2(double x) const {
    const double s = diff_.sigma(x);
    if (!(s != 0.0) || !std::isfinite(s))
      throw std::domain_error("Feller test: diffusion coefficient vanishes or is not finite at x = " +
                              std::to_string(x));
    return s * s;
  }

  double rate(double x) const { return 2.0 * diff_.drift(x) / sigma2(x); }

  /// int_z^y rate
  double exponent(double z, double y) const {
    return integrate([this](double u) { return rate(u); }, z, y, kExponentQuad).value;
  }

  /// int_0^h rate(y - u) du, accurate even when h is below the resolution of y.
  double offset_exponent(double y, double h) const {
    return integrate([this, y](double u) { return rate(y - u); }, 0.0, h, kExponentQuad).value;
  }

  /// int_p^y 2 exp(-(S(y) - S(z))) / sigma(z)^2 dz in the offset variable h = y - z.
  double inner(double y, double p) const {
    const double span = y - p;
    if (!(span > 0.0)) return 0.0;
    double window = span;
    const double r = rate(y);
    if (r > 0.0) {
      window = std::min(span, kWindowExponent / r);
      while (window < span && offset_exponent(y, window) < kWindowExponent) window = std::min(span, 2.0 * window);
    }
    const QuadResult q = integrate(
        [this, y](double h) { return 2.0 / sigma2(y - h) * std::exp(-offset_exponent(y, h)); }, 0.0, window,
        kInnerQuad);
    return q.finite ? q.value : HUGE_VAL;
  }

  /// g(y) given g(p) at the start of the current segment.
  double g(double y, double p, double g_p) const {
    double carried = 0.0;
    if (g_p != 0.0) carried = g_p * std::exp(-exponent(p, y));
    return carried + inner(y, p);
  }

  double reference() const noexcept { return diff_.reference; }

 private:
  Diffusion1D diff_;
};

Diffusion1D reflect(const Diffusion1D& diffusion) {
  Diffusion1D out;
  out.drift = [b = diffusion.drift](double x) { return -b(-x); };
  out.sigma = [s = diffusion.sigma](double x) { return s(-x); };
  out.reference = -diffusion.reference;
  return out;
}

VResult evaluate_plus(const PlusSideV& side, const FellerOptions& options) {
  VResult result;
  const double c = side.reference();
  double p = c;
  double g_p = 0.0;
  double total = 0.0;
  std::vector<double> increments;

  const int last = options.max_doublings + std::max(0, options.max_extensions);
  for (int k = 0; k <= last; ++k) {
    const double q = c + std::ldexp(1.0, k);
    const QuadResult segment = integrate([&](double y) { return side.g(y, p, g_p); }, p, q, kOuterQuad);
    const double increment = segment.finite ? segment.value : HUGE_VAL;
    total += increment;
    result.truncations.push_back(q);
    result.partial_values.push_back(total);
    increments.push_back(increment);
    result.value = total;
    if (!std::isfinite(total)) {
      result.status = VStatus::infinite;
      result.value = HUGE_VAL;
      result.reason = "integrand overflow at truncation " + std::to_string(q);
      return result;
    }
    if (total > options.divergence_budget) {
      result.status = VStatus::infinite;
      result.reason = "partial value exceeds divergence budget at truncation " + std::to_string(q);
      return result;
    }
    g_p = side.g(q, p, g_p);
    p = q;
    if (!std::isfinite(g_p)) {
      result.status = VStatus::infinite;
      result.value = HUGE_VAL;
      result.reason = "inner integral overflow at truncation " + std::to_string(q);
      return result;
    }
    if (k < options.max_doublings || increments.size() < 4) continue;

    // Judge the last three increment ratios.
    const std::size_t n = increments.size();
    bool decaying = true;
    bool stalled = true;
    for (std::size_t i = n - 3; i < n; ++i) {
      const double prev = increments[i - 1];
      const double r = prev == 0.0 ? (increments[i] == 0.0 ? 0.0 : HUGE_VAL) : increments[i] / prev;
      decaying = decaying && r <= options.decay_ratio;
      stalled = stalled && r >= options.stall_ratio;
    }
    const bool settled = increments.back() <= options.tolerance * std::abs(total);
    if (decaying && settled) {
      result.status = VStatus::finite;
      result.reason = "tail increments decay geometrically";
      return result;
    }
    if (stalled) {
      result.status = VStatus::infinite;
      result.reason = "tail increments do not decay";
      return result;
    }
    if (!decaying) break;
  }

  result.status = VStatus::indeterminate;
  result.reason = "tail behaviour inconclusive within the truncation schedule";
  return result;
}

}  // namespace

double scale_density(const Diffusion1D& diffusion, double x) {
  const PlusSideV side(diffusion);
  const QuadResult q =
      integrate([&](double u) { return side.rate(u); }, diffusion.reference, x, QuadOptions{1e-9, 0.0, 2000});
  return std::exp(-q.value);
}

VResult feller_v(const Diffusion1D& diffusion, Boundary boundary, const FellerOptions& options) {
  if (!diffusion.drift || !diffusion.sigma) throw std::invalid_argument("feller_v: incomplete diffusion");
  if (boundary == Boundary::plus) return evaluate_plus(PlusSideV(diffusion), options);
  return evaluate_plus(PlusSideV(reflect(diffusion)), options);
}

VResult feller_v(const Diffusion1D& diffusion, Boundary boundary, double tolerance) {
  FellerOptions options;
  options.tolerance = tolerance;
  return feller_v(diffusion, boundary, options);
}

FellerReport classify_explosion(const Diffusion1D& diffusion, const FellerOptions& options) {
  FellerReport report;
  report.v_plus = feller_v(diffusion, Boundary::plus, options);
  report.v_minus = feller_v(diffusion, Boundary::minus, options);
  if (report.v_plus.status == VStatus::indeterminate || report.v_minus.status == VStatus::indeterminate) {
    report.classification = ExplosionClass::indeterminate;
  } else if (report.v_plus.finite() && report.v_minus.finite()) {
    report.classification = ExplosionClass::explodes_both;
  } else if (report.v_plus.finite()) {
    report.classification = ExplosionClass::explodes_plus;
  } else if (report.v_minus.finite()) {
    report.classification = ExplosionClass::explodes_minus;
  } else {
    report.classification = ExplosionClass::no_explosion;
  }
  return report;
}

FellerReport classify_explosion(const Diffusion1D& diffusion, double tolerance) {
  FellerOptions options;
  options.tolerance = tolerance;
  return classify_explosion(diffusion, options);
}

}  // namespace stochexp
