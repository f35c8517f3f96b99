#include "stochexp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace stochexp {

namespace {

constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& other) const noexcept { return error < other.error; }
};

struct RuleResult {
  double value;
  double error;
  bool finite;
};

RuleResult qk15(const std::function<double(double)>& f, double a, double b) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double uflow = std::numeric_limits<double>::min();
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double abs_half = std::abs(half);

  double fv1[7];
  double fv2[7];
  const double fc = f(centre);
  bool finite = std::isfinite(fc);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  for (int j = 0; j < 3; ++j) {
    const int jtw = 2 * j + 1;
    const double dx = half * kXgk[jtw];
    const double f1 = f(centre - dx);
    const double f2 = f(centre + dx);
    finite = finite && std::isfinite(f1) && std::isfinite(f2);
    fv1[jtw] = f1;
    fv2[jtw] = f2;
    resg += kWg[j] * (f1 + f2);
    resk += kWgk[jtw] * (f1 + f2);
    resabs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
  }
  for (int j = 0; j < 4; ++j) {
    const int jtwm1 = 2 * j;
    const double dx = half * kXgk[jtwm1];
    const double f1 = f(centre - dx);
    const double f2 = f(centre + dx);
    finite = finite && std::isfinite(f1) && std::isfinite(f2);
    fv1[jtwm1] = f1;
    fv2[jtwm1] = f2;
    resk += kWgk[jtwm1] * (f1 + f2);
    resabs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
  }
  if (!finite) return {std::isnan(resk) ? resk : HUGE_VAL, HUGE_VAL, false};

  const double reskh = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

  const double result = resk * half;
  resabs *= abs_half;
  resasc *= abs_half;
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > uflow / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  return {result, err, true};
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b, const QuadOptions& options) {
  QuadResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  if (a > b) {
    out = integrate(f, b, a, options);
    out.value = -out.value;
    return out;
  }

  const RuleResult first = qk15(f, a, b);
  out.evaluations = 15;
  out.intervals = 1;
  if (!first.finite) {
    out.value = first.value;
    out.error = HUGE_VAL;
    out.finite = false;
    return out;
  }

  std::priority_queue<Panel> panels;
  panels.push({a, b, first.value, first.error});
  double total = first.value;
  double total_error = first.error;
  auto done = [&] { return total_error <= std::max(options.abs_tol, options.rel_tol * std::abs(total)); };

  while (!done() && panels.size() < options.max_intervals) {
    const Panel worst = panels.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // interval no longer splittable
    panels.pop();
    const RuleResult left = qk15(f, worst.a, mid);
    const RuleResult right = qk15(f, mid, worst.b);
    out.evaluations += 30;
    if (!left.finite || !right.finite) {
      out.value = std::isnan(left.value) || std::isnan(right.value) ? std::nan("") : HUGE_VAL;
      out.error = HUGE_VAL;
      out.finite = false;
      out.intervals = panels.size() + 2;
      return out;
    }
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    panels.push({worst.a, mid, left.value, left.error});
    panels.push({mid, worst.b, right.value, right.error});
  }

  // Re-sum from the panels to shed the drift of incremental updates.
  total = 0.0;
  total_error = 0.0;
  std::vector<Panel> all;
  all.reserve(panels.size());
  while (!panels.empty()) {
    all.push_back(panels.top());
    panels.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& l, const Panel& r) { return l.a < r.a; });
  for (const Panel& p : all) {
    total += p.value;
    total_error += p.error;
  }
  out.value = total;
  out.error = total_error;
  out.intervals = all.size();
  out.converged = done();
  return out;
}

}  // namespace stochexp
