#include "stochexp/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "stochexp/catalog.hpp"
#include "stochexp/girsanov.hpp"
#include "stochexp/parallel.hpp"
#include "stochexp/stochastic_exponential.hpp"

namespace stochexp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

SdeSpec scalar_sde(std::function<double(double)> drift, std::function<double(double)> diffusion, double x0) {
  SdeSpec spec;
  spec.dim = 1;
  spec.drift = scalar(std::move(drift));
  spec.diffusion = scalar(std::move(diffusion));
  spec.x0 = {x0};
  return spec;
}

double power_drift(double x, double alpha) { return std::pow(std::abs(x), alpha); }

std::string tagged(const std::string& base, const char* key, double value) {
  return base + "[" + key + "=" + format_double(value) + "]";
}

void require_paths(std::size_t n, const char* scenario) {
  if (n < 2) throw std::invalid_argument(std::string(scenario) + ": need at least two paths");
}

std::string join(std::span<const double> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += format_double(values[i]);
  }
  return out;
}

void add_solve_parameters(ScenarioReport& report, const SolveConfig& config) {
  report.add_parameter("base_step", config.base_step);
  report.add_parameter("x_max", config.x_max);
  report.add_parameter("kappa", config.kappa);
  report.add_parameter("max_substeps", static_cast<double>(config.max_substeps));
}

}  // namespace

double empirical_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("empirical_quantile: no values");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("empirical_quantile: q outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

// ---------------------------------------------------------------------------------------

ScenarioReport run_corollary2_gap(const Corollary2Params& params, const RunContext& ctx) {
  if (!(params.alpha > 3.0)) throw std::invalid_argument("corollary2: alpha must exceed 3");
  if (!(params.horizon > 0.0)) throw std::invalid_argument("corollary2: horizon must be positive");
  require_paths(params.n_paths, "corollary2");
  params.config.validate();
  const auto start = Clock::now();
  const double alpha = params.alpha;

  // Gate: both drifts must explode through +inf before any simulation.
  const Diffusion1D original{[alpha](double x) { return power_drift(x, alpha); }, [](double) { return 1.0; },
                             params.x0};
  const Diffusion1D transformed{[alpha](double x) { return power_drift(x, alpha) + x; },
                                [](double) { return 1.0; }, params.x0};
  const FellerReport gate_original = classify_explosion(original);
  const FellerReport gate_transformed = classify_explosion(transformed);
  if (gate_original.classification != ExplosionClass::explodes_plus ||
      gate_transformed.classification != ExplosionClass::explodes_plus)
    throw std::runtime_error(std::string("corollary2: Feller gate failed (original ") +
                             to_string(gate_original.classification) + ", transformed " +
                             to_string(gate_transformed.classification) + ")");

  const SdeSpec spec = scalar_sde([alpha](double x) { return power_drift(x, alpha); },
                                  [](double) { return 1.0; }, params.x0);
  const SdeSpec tilde = corollary2_transform(spec);

  const std::size_t n = params.n_paths;
  std::vector<double> z(n), survived(n), exploded_a(n), limit_a(n), limit_b(n), zero_z(n);
  parallel_for(n, ctx.jobs, [&](std::size_t i) {
    const SolutionPath a =
        solve(spec, params.config, RngStream(ctx.master_seed, i, streams::corollary2_original), params.horizon);
    const ExponentialPath ez = stochastic_exponential(a);
    z[i] = std::exp(ez.final_log_z());
    zero_z[i] = ez.zero_flag ? 1.0 : 0.0;
    exploded_a[i] = a.exploded() ? 1.0 : 0.0;
    limit_a[i] = a.status == SolveStatus::step_limit_hit ? 1.0 : 0.0;

    const SolutionPath b = solve(tilde, params.config,
                                 RngStream(ctx.master_seed, i, streams::corollary2_transformed), params.horizon);
    survived[i] = b.status == SolveStatus::completed ? 1.0 : 0.0;
    limit_b[i] = b.status == SolveStatus::step_limit_hit ? 1.0 : 0.0;
  });

  ScenarioReport report;
  report.scenario = "corollary2";
  report.master_seed = ctx.master_seed;
  report.add_parameter("alpha", alpha);
  report.add_parameter("x0", params.x0);
  report.add_parameter("horizon", params.horizon);
  report.add_parameter("paths", static_cast<double>(n));
  add_solve_parameters(report, params.config);

  const McEstimate mean_z = sample_mean(z);
  const McEstimate survival = sample_mean(survived);
  report.add(Estimate::from_mc("E_P[Z_X(T)]", mean_z));
  report.add(Estimate::from_mc("P~(eta>T)", survival));
  Estimate gap{"gap", mean_z.mean - survival.mean,
               std::sqrt(mean_z.std_error * mean_z.std_error + survival.std_error * survival.std_error), n, false};
  report.add(gap);
  report.add(Estimate::from_mc("P(eta^X<=T)", sample_mean(exploded_a)));

  report.check("martingale_mean", Rule::within_se, "E_P[Z_X(T)]", "", 1.0, 3.0,
               "E_P[Z_X(T)] within 3 SE of 1");
  report.check("transformed_explodes", Rule::below, "P~(eta>T)", "", 1.0, 3.0,
               "P~(eta>T) below 1 by more than 3 SE");
  report.check("gap_positive", Rule::above, "gap", "", 0.0, 2.326, "gap positive at 99% one-sided confidence");

  double limits_a = 0, limits_b = 0, zeros = 0;
  for (std::size_t i = 0; i < n; ++i) {
    limits_a += limit_a[i];
    limits_b += limit_b[i];
    zeros += zero_z[i];
  }
  report.add_diagnostic("feller_original", to_string(gate_original.classification));
  report.add_diagnostic("feller_transformed", to_string(gate_transformed.classification));
  report.add_diagnostic("feller_original_v_plus", gate_original.v_plus.value);
  report.add_diagnostic("feller_transformed_v_plus", gate_transformed.v_plus.value);
  report.add_diagnostic("step_limit_paths_original", limits_a);
  report.add_diagnostic("step_limit_paths_transformed", limits_b);
  report.add_diagnostic("zero_convention_paths", zeros);
  report.wall_clock_seconds = seconds_since(start);
  return report;
}

// ---------------------------------------------------------------------------------------

ScenarioReport run_candidate_nonuniqueness(const NonuniquenessParams& params, const RunContext& ctx) {
  if (params.lambdas.empty()) throw std::invalid_argument("nonunique: lambda list is empty");
  require_paths(params.n_paths, "nonunique");
  const auto start = Clock::now();
  const TimeGrid grid = make_grid(params.horizon, params.base_step);
  const double horizon = grid.back();
  const std::size_t n = params.n_paths;

  std::vector<double> w_end(n);
  parallel_for(n, ctx.jobs, [&](std::size_t i) {
    RngStream stream(ctx.master_seed, i, streams::nonunique);
    w_end[i] = sample_brownian(grid, stream, 1).values.back();
  });

  ScenarioReport report;
  report.scenario = "nonunique";
  report.master_seed = ctx.master_seed;
  report.add_parameter("lambdas", join(params.lambdas));
  report.add_parameter("horizon", horizon);
  report.add_parameter("paths", static_cast<double>(n));
  report.add_parameter("base_step", params.base_step);

  double passing = 0.0;
  std::vector<double> weights(n), shifted(n), shifted_sq(n);
  for (const double lambda : params.lambdas) {
    for (std::size_t i = 0; i < n; ++i) {
      weights[i] = std::exp(lambda * w_end[i] - 0.5 * lambda * lambda * horizon);
      shifted[i] = w_end[i] - lambda * horizon;
      shifted_sq[i] = shifted[i] * shifted[i];
    }
    const std::string wm = tagged("weight_mean", "lambda", lambda);
    const std::string sm = tagged("shifted_mean", "lambda", lambda);
    const std::string sv = tagged("shifted_var", "lambda", lambda);
    report.add(Estimate::from_mc(wm, sample_mean(weights)));
    report.add(Estimate::from_mc(sm, weighted_expectation(shifted, weights)));
    report.add(Estimate::from_mc(sv, weighted_expectation(shifted_sq, weights)));
    const bool ok1 = report.check(tagged("weight_mean_is_one", "lambda", lambda), Rule::within_se, wm, "", 1.0, 3.0,
                                  "E_P[dP^lambda/dP] within 3 SE of 1")
                         .passed;
    const bool ok2 = report.check(tagged("shifted_mean_is_zero", "lambda", lambda), Rule::within_se, sm, "", 0.0,
                                  3.0, "E^lambda[W(T) - lambda T] within 3 SE of 0")
                         .passed;
    const bool ok3 = report.check(tagged("shifted_var_is_T", "lambda", lambda), Rule::within_se, sv, "", horizon,
                                  3.0, "E^lambda[(W(T) - lambda T)^2] within 3 SE of T")
                         .passed;
    if (ok1 && ok2 && ok3) passing += 1.0;
  }
  report.add(Estimate::exact_value("lambdas_passing", passing));
  report.check("nonuniqueness_witness", Rule::at_least, "lambdas_passing", "", 2.0, 0.0,
               "at least two distinct tilts qualify as candidate measures");
  report.wall_clock_seconds = seconds_since(start);
  return report;
}

// ---------------------------------------------------------------------------------------

double nonexistence_f(double x) noexcept { return 1.0 + 1.0 / (1.0 + std::exp(-x)); }

TimeGrid nonexistence_grid(double horizon, std::span<const double> epsilons, double base_step) {
  if (!(horizon > 0.0)) throw std::invalid_argument("nonexistence_grid: horizon must be positive");
  std::vector<double> required{0.0, horizon};
  double eps_min = horizon;
  for (const double eps : epsilons) {
    if (!(eps > 0.0 && eps < horizon)) throw std::invalid_argument("nonexistence_grid: eps must lie in (0, T)");
    required.push_back(horizon - eps);
    eps_min = std::min(eps_min, eps);
  }
  std::vector<double> optional;
  const TimeGrid uniform = make_grid(horizon, base_step);
  for (double t : uniform.times()) optional.push_back(t);
  // Geometric refinement towards T, down to eps_min / 16.
  for (int j = 1;; ++j) {
    const double gap = horizon * std::exp2(-0.5 * j);
    if (gap < eps_min / 16.0) break;
    optional.push_back(horizon - gap);
  }
  std::sort(required.begin(), required.end());
  const double slack = 1e-9 * horizon;
  std::vector<double> times = required;
  for (const double t : optional) {
    const auto it = std::lower_bound(required.begin(), required.end(), t);
    const bool near_next = it != required.end() && *it - t <= slack;
    const bool near_prev = it != required.begin() && t - *(it - 1) <= slack;
    if (!near_next && !near_prev) times.push_back(t);
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  return TimeGrid::from_times(std::move(times), horizon, base_step);
}

std::vector<double> compute_wqc(const BrownianPath& w, double horizon, std::span<const double> epsilons) {
  const TimeGrid& grid = w.grid;
  std::vector<std::size_t> index(epsilons.size());
  std::size_t last = 0;
  for (std::size_t e = 0; e < epsilons.size(); ++e) {
    index[e] = grid.find(horizon - epsilons[e]);
    if (index[e] == TimeGrid::npos) throw std::invalid_argument("compute_wqc: T - eps is not a grid point");
    last = std::max(last, index[e]);
  }
  std::vector<double> integral(last + 1, 0.0);
  for (std::size_t k = 0; k < last; ++k) {
    const double remaining = horizon - grid[k + 1];
    integral[k + 1] = integral[k] + nonexistence_f(w.value(k)) * std::log1p(grid.step(k) / remaining);
  }
  std::vector<double> out(epsilons.size());
  for (std::size_t e = 0; e < epsilons.size(); ++e) out[e] = w.value(index[e]) - integral[index[e]];
  return out;
}

ScenarioReport run_candidate_nonexistence(const NonexistenceParams& params, const RunContext& ctx) {
  require_paths(params.n_paths, "nonexist");
  const auto start = Clock::now();
  std::vector<double> eps = params.epsilons;
  if (eps.empty())
    for (int j = 4; j <= 14; ++j) eps.push_back(std::ldexp(1.0, -j));
  for (std::size_t e = 1; e < eps.size(); ++e)
    if (!(eps[e] < eps[e - 1])) throw std::invalid_argument("nonexist: eps list must be strictly decreasing");
  const double horizon = params.horizon;
  const TimeGrid grid = nonexistence_grid(horizon, eps, params.base_step);
  const std::size_t n = params.n_paths;
  const std::size_t m = eps.size();

  std::vector<double> wqc(n * m), max_w(n);
  parallel_for(n, ctx.jobs, [&](std::size_t i) {
    RngStream stream(ctx.master_seed, i, streams::nonexist);
    const BrownianPath w = sample_brownian(grid, stream, 1);
    const std::vector<double> values = compute_wqc(w, horizon, eps);
    std::copy(values.begin(), values.end(), wqc.begin() + static_cast<std::ptrdiff_t>(i * m));
    max_w[i] = *std::max_element(w.values.begin(), w.values.end());
  });

  ScenarioReport report;
  report.scenario = "nonexist";
  report.master_seed = ctx.master_seed;
  report.add_parameter("horizon", horizon);
  report.add_parameter("eps", join(eps));
  report.add_parameter("paths", static_cast<double>(n));
  report.add_parameter("base_step", params.base_step);
  report.add_parameter("f", "1 + 1/(1 + exp(-x))");
  report.add_diagnostic("grid_points", static_cast<double>(grid.size()));

  // Deterministic checks: the product rule on 1/(T - u) and the flat path W = 0.
  BrownianPath flat{grid, 1, std::vector<double>(grid.size(), 0.0)};
  const std::vector<double> flat_wqc = compute_wqc(flat, horizon, eps);
  double quad_err = 0.0;
  double flat_err = 0.0;
  for (std::size_t e = 0; e < m; ++e) {
    const double exact = std::log(horizon / eps[e]);
    const std::size_t idx = grid.find(horizon - eps[e]);
    double sum = 0.0;
    for (std::size_t k = 0; k < idx; ++k) sum += std::log1p(grid.step(k) / (horizon - grid[k + 1]));
    quad_err = std::max(quad_err, std::abs(sum - exact) / exact);
    flat_err = std::max(flat_err, std::abs(flat_wqc[e] + 1.5 * exact) / (1.5 * exact));
  }
  report.add(Estimate::exact_value("log_integral_rel_error", quad_err));
  report.add(Estimate::exact_value("flat_path_rel_error", flat_err));
  report.check("log_integral_quadrature", Rule::at_most, "log_integral_rel_error", "", 1e-6, 0.0,
               "int_0^{T-eps} du/(T-u) matches log(T/eps) within 1e-6 relative");
  report.check("flat_path_value", Rule::at_most, "flat_path_rel_error", "", 1e-6, 0.0,
               "W = 0 gives -(3/2) log(T/eps)");

  double excess = -HUGE_VAL;
  std::vector<std::string> names(m);
  for (std::size_t e = 0; e < m; ++e) {
    const double log_ratio = std::log(horizon / eps[e]);
    double path_max = -HUGE_VAL;
    double bound_max = -HUGE_VAL;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = wqc[i * m + e];
      path_max = std::max(path_max, v);
      bound_max = std::max(bound_max, max_w[i] - log_ratio);
      excess = std::max(excess, v - (max_w[i] - log_ratio));
    }
    names[e] = tagged("max_wqc", "eps", eps[e]);
    report.add(Estimate::exact_value(names[e], path_max));
    report.add(Estimate::exact_value(tagged("max_bound", "eps", eps[e]), bound_max));
  }
  report.add(Estimate::exact_value("max_bound_excess", excess));
  report.check("below_bound_every_path", Rule::at_most, "max_bound_excess", "", 1e-6, 0.0,
               "W^QC(T-eps) <= max W - log(T/eps) + 1e-6 on every path");
  for (std::size_t e = 1; e < m; ++e)
    report.check(tagged("decreasing", "eps", eps[e]), Rule::below, names[e], names[e - 1], 0.0, 0.0,
                 "path maximum strictly decreases as eps shrinks");
  for (std::size_t e = 0; e < m; ++e)
    if (eps[e] <= horizon * std::ldexp(1.0, -8) * (1.0 + 1e-12))
      report.check(tagged("negative", "eps", eps[e]), Rule::below, names[e], "", 0.0, 0.0,
                   "path maximum negative for eps <= 2^-8 T");
  report.wall_clock_seconds = seconds_since(start);
  return report;
}

// ---------------------------------------------------------------------------------------

BrownianPath tanaka_driver(const BrownianPath& x) {
  if (x.dim != 1) throw std::invalid_argument("tanaka_driver: scalar paths only");
  BrownianPath w{x.grid, 1, std::vector<double>(x.values.size(), 0.0)};
  for (std::size_t k = 0; k + 1 < x.values.size(); ++k)
    w.values[k + 1] = w.values[k] + sign_nonpositive_negative(x.values[k]) * (x.values[k + 1] - x.values[k]);
  return w;
}

TanakaResiduals tanaka_residuals(const BrownianPath& x, const BrownianPath& w) {
  if (x.values.size() != w.values.size()) throw std::invalid_argument("tanaka_residuals: length mismatch");
  TanakaResiduals r;
  double direct = 0.0;
  double mirror = 0.0;
  for (std::size_t k = 0; k + 1 < x.values.size(); ++k) {
    const double dw = w.values[k + 1] - w.values[k];
    direct += sign_nonpositive_negative(x.values[k]) * dw;
    mirror += sign_nonpositive_negative(-x.values[k]) * dw;
    r.direct = std::max(r.direct, std::abs(x.values[k + 1] - x.values[0] - direct));
    r.mirror = std::max(r.mirror, std::abs(-x.values[k + 1] + x.values[0] - mirror));
  }
  return r;
}

ScenarioReport run_tanaka(const TanakaParams& params, const RunContext& ctx) {
  require_paths(params.n_paths, "tanaka");
  const auto start = Clock::now();
  const TimeGrid grid = make_grid(params.horizon, params.base_step);
  const std::size_t n = params.n_paths;
  std::vector<double> direct(n), mirror(n), lag1(n), w_end(n), w_end_sq(n);
  parallel_for(n, ctx.jobs, [&](std::size_t i) {
    RngStream stream(ctx.master_seed, i, streams::tanaka);
    const BrownianPath x = sample_brownian(grid, stream, 1);
    const BrownianPath w = tanaka_driver(x);
    const TanakaResiduals r = tanaka_residuals(x, w);
    direct[i] = r.direct;
    mirror[i] = r.mirror;
    double acc = 0.0;
    const std::size_t steps = grid.steps();
    for (std::size_t k = 0; k + 1 < steps; ++k) {
      const double a = w.values[k + 1] - w.values[k];
      const double b = w.values[k + 2] - w.values[k + 1];
      acc += a * b / std::sqrt(grid.step(k) * grid.step(k + 1));
    }
    lag1[i] = steps > 1 ? acc / static_cast<double>(steps - 1) : 0.0;
    w_end[i] = w.values.back();
    w_end_sq[i] = w_end[i] * w_end[i];
  });

  ScenarioReport report;
  report.scenario = "tanaka";
  report.master_seed = ctx.master_seed;
  report.add_parameter("horizon", grid.back());
  report.add_parameter("paths", static_cast<double>(n));
  report.add_parameter("base_step", params.base_step);
  report.add_parameter("residual_constant", params.residual_constant);

  const double scale = std::sqrt(params.base_step);
  report.add(Estimate::exact_value("residual_direct/sqrt(dt)", *std::max_element(direct.begin(), direct.end()) / scale));
  report.add(Estimate::exact_value("residual_mirror/sqrt(dt)", *std::max_element(mirror.begin(), mirror.end()) / scale));
  report.add(Estimate::from_mc("lag1_correlation", sample_mean(lag1)));
  report.add(Estimate::from_mc("W(T)_mean", sample_mean(w_end)));
  report.add(Estimate::from_mc("W(T)^2_mean", sample_mean(w_end_sq)));

  report.check("weak_solution_identity", Rule::at_most, "residual_direct/sqrt(dt)", "", params.residual_constant, 0.0,
               "max |X - int sgn X dW| <= C sqrt(dt)");
  report.check("mirror_identity", Rule::at_most, "residual_mirror/sqrt(dt)", "", params.residual_constant, 0.0,
               "(-X, W) satisfies the identity within the same C sqrt(dt)");
  report.check("lag1_uncorrelated", Rule::within_se, "lag1_correlation", "", 0.0, 3.0,
               "lag-1 correlation of W increments within 3 SE of 0");
  report.check("W_mean_zero", Rule::within_se, "W(T)_mean", "", 0.0, 3.0, "E W(T) within 3 SE of 0");
  report.check("W_variance_T", Rule::within_se, "W(T)^2_mean", "", grid.back(), 3.0, "E W(T)^2 within 3 SE of T");
  report.wall_clock_seconds = seconds_since(start);
  return report;
}

// ---------------------------------------------------------------------------------------

ScenarioReport run_integrability_check(const IntegrabilityParams& params, const RunContext& ctx) {
  if (!(params.alpha > 3.0)) throw std::invalid_argument("integrability: alpha must exceed 3");
  require_paths(params.n_paths, "integrability");
  params.config.validate();
  if (!(params.coarse_x_max > 0.0 && params.coarse_x_max < params.config.x_max))
    throw std::invalid_argument("integrability: coarse threshold must lie below x_max");
  const auto start = Clock::now();
  const double alpha = params.alpha;
  const SdeSpec spec = scalar_sde([alpha](double x) { return power_drift(x, alpha); },
                                  [](double) { return 1.0; }, params.x0);
  SolveConfig coarse = params.config;
  coarse.x_max = params.coarse_x_max;

  const std::size_t n = params.n_paths;
  std::vector<double> exploded(n), exploded_coarse(n), m_fine(n), m_coarse(n), log_z(n), zero_flag(n), eta(n);
  parallel_for(n, ctx.jobs, [&](std::size_t i) {
    const RngStream stream(ctx.master_seed, i, streams::integrability);
    const SolutionPath fine = solve(spec, params.config, stream, params.horizon);
    const SolutionPath rough = solve(spec, coarse, stream, params.horizon);
    exploded[i] = fine.exploded() ? 1.0 : 0.0;
    exploded_coarse[i] = rough.exploded() ? 1.0 : 0.0;
    m_fine[i] = fine.m_values.back();
    m_coarse[i] = rough.m_values.back();
    eta[i] = fine.exploded() ? fine.eta_estimate : HUGE_VAL;
    const ExponentialPath z = stochastic_exponential(fine);
    log_z[i] = z.final_log_z();
    zero_flag[i] = z.zero_flag ? 1.0 : 0.0;
  });

  std::vector<double> tail_fine, tail_coarse, etas;
  double nonpositive_z = 0.0;
  double min_log_z = HUGE_VAL;
  double zero_flags = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (exploded[i] != 0.0) {
      tail_fine.push_back(m_fine[i]);
      etas.push_back(eta[i]);
      if (!(std::isfinite(log_z[i]) && std::exp(log_z[i]) > 0.0)) nonpositive_z += 1.0;
      min_log_z = std::min(min_log_z, log_z[i]);
      zero_flags += zero_flag[i];
    }
    if (exploded_coarse[i] != 0.0) tail_coarse.push_back(m_coarse[i]);
  }

  ScenarioReport report;
  report.scenario = "integrability";
  report.master_seed = ctx.master_seed;
  report.add_parameter("alpha", alpha);
  report.add_parameter("x0", params.x0);
  report.add_parameter("horizon", params.horizon);
  report.add_parameter("paths", static_cast<double>(n));
  add_solve_parameters(report, params.config);
  report.add_parameter("coarse_x_max", params.coarse_x_max);

  report.add(Estimate::from_mc("exploded_fraction", sample_mean(exploded)));
  report.add(Estimate::exact_value("nonpositive_Z(eta)_paths", nonpositive_z));
  const double p99_fine = tail_fine.empty() ? HUGE_VAL : empirical_quantile(tail_fine, 0.99);
  const double p99_coarse = tail_coarse.empty() ? HUGE_VAL : empirical_quantile(tail_coarse, 0.99);
  report.add(Estimate::exact_value("p99_M(eta)", p99_fine));
  report.add(Estimate::exact_value("p99_M(eta)_coarse", p99_coarse));
  const double rel = std::abs(p99_fine - p99_coarse) / std::abs(p99_fine);
  report.add(Estimate::exact_value("p99_M(eta)_rel_change", std::isfinite(rel) ? rel : HUGE_VAL));

  report.check("explodes", Rule::at_least, "exploded_fraction", "", 0.99, 0.0, "exploded fraction >= 0.99");
  report.check("Z_positive_at_eta", Rule::at_most, "nonpositive_Z(eta)_paths", "", 0.0, 0.0,
               "Z_X(eta) > 0 on every exploded path");
  report.check("energy_tail_stable", Rule::at_most, "p99_M(eta)_rel_change", "", 0.1, 0.0,
               "99th percentile of M_X(eta) stable within 10% across thresholds");

  report.add_diagnostic("exploded_paths", static_cast<double>(tail_fine.size()));
  report.add_diagnostic("exploded_paths_coarse", static_cast<double>(tail_coarse.size()));
  report.add_diagnostic("max_M(eta)", tail_fine.empty() ? 0.0 : *std::max_element(tail_fine.begin(), tail_fine.end()));
  report.add_diagnostic("median_eta", etas.empty() ? HUGE_VAL : empirical_quantile(etas, 0.5));
  report.add_diagnostic("min_log_Z(eta)", min_log_z);
  report.add_diagnostic("zero_convention_paths", zero_flags);
  report.wall_clock_seconds = seconds_since(start);
  return report;
}

// ---------------------------------------------------------------------------------------

ScenarioReport run_simulation(const SimulationParams& params, const RunContext& ctx) {
  require_paths(params.n_paths, "simulate");
  params.config.validate();
  const auto start = Clock::now();
  const Coefficient drift = parse_coefficient(params.drift);
  const Coefficient diffusion = parse_coefficient(params.diffusion);
  const SdeSpec spec = scalar_sde(drift.f, diffusion.f, params.x0);
  const std::size_t n = params.n_paths;
  std::vector<double> exploded(n), limited(n), terminal(n), z(n), energy(n);
  parallel_for(n, ctx.jobs, [&](std::size_t i) {
    const SolutionPath path =
        solve(spec, params.config, RngStream(ctx.master_seed, i, streams::simulate), params.horizon);
    exploded[i] = path.exploded() ? 1.0 : 0.0;
    limited[i] = path.status == SolveStatus::step_limit_hit ? 1.0 : 0.0;
    terminal[i] = path.states.back();
    z[i] = std::exp(stochastic_exponential(path).final_log_z());
    energy[i] = path.m_values.back();
  });

  ScenarioReport report;
  report.scenario = "simulate";
  report.master_seed = ctx.master_seed;
  report.add_parameter("drift", drift.name);
  report.add_parameter("diffusion", diffusion.name);
  report.add_parameter("x0", params.x0);
  report.add_parameter("horizon", params.horizon);
  report.add_parameter("paths", static_cast<double>(n));
  add_solve_parameters(report, params.config);

  std::vector<double> completed_terminal;
  for (std::size_t i = 0; i < n; ++i)
    if (exploded[i] == 0.0 && limited[i] == 0.0) completed_terminal.push_back(terminal[i]);
  report.add(Estimate::from_mc("exploded_fraction", sample_mean(exploded)));
  report.add(Estimate::from_mc("step_limit_fraction", sample_mean(limited)));
  if (completed_terminal.size() >= 2)
    report.add(Estimate::from_mc("E[X(T); completed]", sample_mean(completed_terminal)));
  report.add(Estimate::from_mc("E[Z_X(T)]", sample_mean(z)));
  report.add(Estimate::from_mc("E[M_X(T)]", sample_mean(energy)));
  report.wall_clock_seconds = seconds_since(start);
  return report;
}

ScenarioReport run_feller_classification(const FellerParams& params, const RunContext& ctx) {
  const auto start = Clock::now();
  const Coefficient drift = parse_coefficient(params.drift);
  const Coefficient sigma = parse_coefficient(params.diffusion);
  const FellerReport fr = classify_explosion(Diffusion1D{drift.f, sigma.f, params.reference}, params.options);

  ScenarioReport report;
  report.scenario = "feller";
  report.master_seed = ctx.master_seed;
  report.add_parameter("drift", drift.name);
  report.add_parameter("diffusion", sigma.name);
  report.add_parameter("reference", params.reference);
  report.add_parameter("tolerance", params.options.tolerance);

  report.add(Estimate::exact_value("v_plus", fr.v_plus.value));
  report.add(Estimate::exact_value("v_minus", fr.v_minus.value));
  report.add(Estimate::exact_value("v_plus_finite", fr.v_plus.finite() ? 1.0 : 0.0));
  report.add(Estimate::exact_value("v_minus_finite", fr.v_minus.finite() ? 1.0 : 0.0));
  const double undecided = (fr.v_plus.status == VStatus::indeterminate ? 1.0 : 0.0) +
                           (fr.v_minus.status == VStatus::indeterminate ? 1.0 : 0.0);
  report.add(Estimate::exact_value("indeterminate_sides", undecided));
  report.check("determinate", Rule::at_most, "indeterminate_sides", "", 0.0, 0.0,
               "both boundaries classified as finite or infinite");

  report.add_diagnostic("classification", to_string(fr.classification));
  report.add_diagnostic("v_plus_status", to_string(fr.v_plus.status));
  report.add_diagnostic("v_minus_status", to_string(fr.v_minus.status));
  report.add_diagnostic("v_plus_reason", fr.v_plus.reason);
  report.add_diagnostic("v_minus_reason", fr.v_minus.reason);
  report.add_diagnostic("v_plus_truncations", static_cast<double>(fr.v_plus.truncations.size()));
  report.add_diagnostic("v_minus_truncations", static_cast<double>(fr.v_minus.truncations.size()));
  if (!fr.v_plus.truncations.empty()) report.add_diagnostic("v_plus_last_truncation", fr.v_plus.truncations.back());
  if (!fr.v_minus.truncations.empty())
    report.add_diagnostic("v_minus_last_truncation", fr.v_minus.truncations.back());
  report.wall_clock_seconds = seconds_since(start);
  return report;
}

}  // namespace stochexp
