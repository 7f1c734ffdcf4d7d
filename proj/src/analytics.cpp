#include "rgg/analytics.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "rgg/geometry.hpp"
#include "rgg/graph.hpp"
#include "rgg/numerics.hpp"

namespace rgg {

namespace {

double vec_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

// Shape profile t(r) = A(r) / (kappa lambda delta^d) in [0,1]: the fraction
// of B_{delta/2}(x) inside the unit ball, |x| = r.
double profile(const ModelParams& p, double r) {
  return geom::ball_intersection_fraction(p.d, 0.5 * p.delta, 1.0, r);
}

// int_0^{1+delta/2} g(t(r)) r^{d-1} dr. t is constant on [0, |1 - delta/2|]
// and changes analytic form there, so the domain is split at that breakpoint
// and the constant part integrated in closed form.
double radial_profile_integral(const ModelParams& p,
                               const std::function<double(double)>& g,
                               double rel_tol) {
  const int d = p.d;
  const double delta = p.delta;
  const double r_in = std::fabs(1.0 - 0.5 * delta);
  const double r_out = 1.0 + 0.5 * delta;
  const double t_in =
      delta <= 2.0 ? 1.0 : std::exp(-d * std::log(0.5 * delta));
  const double interior = g(t_in) * std::pow(r_in, d) / d;
  const auto integrand = [&](double r) {
    return g(profile(p, r)) * std::pow(r, d - 1);
  };
  const double mid = 0.5 * (r_in + r_out);
  const double coarse = (r_out - r_in) / 6.0 *
                        (integrand(r_in) + 4.0 * integrand(mid) +
                         integrand(r_out));
  const double scale =
      std::fabs(interior) + std::fabs(coarse) + 1e-300;
  const double band =
      num::adaptive_simpson(integrand, r_in, r_out, rel_tol * scale);
  return interior + band;
}

// log(d * kappa_d), the surface-measure factor of the radial integrals
double log_sphere_factor(int d) {
  return std::log(static_cast<double>(d)) + geom::log_unit_ball_volume(d);
}

// P(a) = a^4 + 6a^3 + 7a^2 + a as a LogValue
LogValue poly_P_log(const LogValue& a) {
  const LogValue six = LogValue::from_linear(6.0);
  const LogValue seven = LogValue::from_linear(7.0);
  return pow(a, 4.0) + six * pow(a, 3.0) + seven * pow(a, 2.0) + a;
}

}  // namespace

const char* to_string(GammaMode mode) {
  switch (mode) {
    case GammaMode::numericQuadrature: return "numeric_quadrature";
    case GammaMode::monteCarlo: return "monte_carlo";
    case GammaMode::paperDominating: return "paper_dominating";
  }
  return "unknown";
}

const char* to_string(VarianceMode mode) {
  return mode == VarianceMode::quadrature ? "quadrature" : "bracket_worst";
}

const char* to_string(PhaseLabel label) {
  switch (label) {
    case PhaseLabel::growing: return "growing";
    case PhaseLabel::stabilizing: return "stabilizing";
    case PhaseLabel::vanishing: return "vanishing";
  }
  return "unknown";
}

MomentReport moment_report(double a) {
  if (!(a >= 0.0)) throw std::invalid_argument("moment_report: a >= 0");
  MomentReport r;
  r.a = a;
  r.m2 = a * a + a;
  r.m3abs = ((a + 3.0) * a + 1.0) * a;
  r.m4 = (((a + 6.0) * a + 7.0) * a + 1.0) * a;
  r.q = ((a + 4.0) * a + 2.0) * a * a;
  return r;
}

LogValue a_interior_log(const ModelParams& params) {
  params.validate();
  const LogValue lam = params.intensity();
  if (lam.is_zero()) return LogValue::zero();
  return lam * LogValue::from_log(geom::log_unit_ball_volume(params.d) +
                                  params.d * std::log(params.delta));
}

LogValue local_mean_A_log(double x_norm, const ModelParams& params) {
  if (!(x_norm >= 0.0)) throw std::invalid_argument("local_mean_A: |x| >= 0");
  const LogValue a = a_interior_log(params);
  if (a.is_zero()) return LogValue::zero();
  const double frac = profile(params, x_norm);
  if (frac == 0.0) return LogValue::zero();
  if (frac == 1.0) return a;
  return a * LogValue::from_linear(frac);
}

double local_mean_A(double x_norm, const ModelParams& params) {
  return local_mean_A_log(x_norm, params).to_double();
}

McEstimate copair_B(std::span<const double> x1, std::span<const double> x2,
                    const ModelParams& params, std::uint64_t budget,
                    RandomStream stream) {
  params.validate();
  if (x1.size() != x2.size() ||
      static_cast<int>(x1.size()) != params.d) {
    throw std::invalid_argument("copair_B: dimension mismatch");
  }
  if (budget == 0) throw std::invalid_argument("copair_B: budget > 0");
  double dist2 = 0.0;
  for (std::size_t i = 0; i < x1.size(); ++i) {
    const double dx = x1[i] - x2[i];
    dist2 += dx * dx;
  }
  if (dist2 > 4.0 * params.delta * params.delta) return {0.0, 0.0};
  const double lam = params.lambda_linear();
  if (!std::isfinite(lam)) {
    throw std::invalid_argument("copair_B: intensity not desk-scale");
  }
  if (lam == 0.0) return {0.0, 0.0};
  const double vol = lam * geom::unit_ball_volume(params.d) *
                     std::pow(params.delta, params.d);
  Rng rng(stream);
  const Window cell{{}, params.delta};
  std::vector<double> y(params.d);
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < budget; ++s) {
    const auto off = uniform_in_ball(params.d, cell, rng);
    for (int k = 0; k < params.d; ++k) y[k] = x1[k] + off[k];
    if (kernel(x1, y, params.delta) && kernel(x2, y, params.delta)) ++hits;
  }
  const double m = static_cast<double>(budget);
  const double phat = hits / m;
  return {vol * phat, vol * std::sqrt(phat * (1.0 - phat) / m)};
}

LogValue mean_edges_log(const ModelParams& params) {
  params.validate();
  const LogValue lam = params.intensity();
  if (lam.is_zero()) return LogValue::zero();
  const double lk = geom::log_unit_ball_volume(params.d);
  return LogValue::from_log(std::log(0.5) + 2.0 * lk +
                            2.0 * lam.log_magnitude() +
                            params.d * std::log(params.delta));
}

double mean_edges(const ModelParams& params) {
  return mean_edges_log(params).to_double();
}

LogValue mean_edges_quadrature_log(const ModelParams& params, double rel_tol) {
  params.validate();
  const LogValue lam = params.intensity();
  const LogValue a = a_interior_log(params);
  if (lam.is_zero()) return LogValue::zero();
  const double i1 =
      radial_profile_integral(params, [](double t) { return t; }, rel_tol);
  return lam * a *
         LogValue::from_log(log_sphere_factor(params.d) + std::log(0.5)) *
         LogValue::from_linear(i1);
}

namespace {

// (1 +- delta/2)^d kappa^3 lambda^3 delta^{2d}: the bracket ends for
// int A^2 dmu implied by the two-sided indicator bound on the local mean.
LogValue gamma2_bracket_end(const ModelParams& p, bool upper) {
  const LogValue lam = p.intensity();
  if (lam.is_zero()) return LogValue::zero();
  const double half = 0.5 * p.delta;
  double log_edge;
  if (upper) {
    log_edge = p.d * std::log1p(half);
  } else {
    if (half >= 1.0) return LogValue::zero();
    log_edge = p.d * std::log1p(-half);
  }
  return LogValue::from_log(log_edge +
                            3.0 * (geom::log_unit_ball_volume(p.d) +
                                   lam.log_magnitude()) +
                            2.0 * p.d * std::log(p.delta));
}

}  // namespace

LogValue gamma2_log(const ModelParams& params, double rel_tol) {
  params.validate();
  const LogValue lam = params.intensity();
  if (lam.is_zero()) return LogValue::zero();
  const LogValue a = a_interior_log(params);
  const double i2 = radial_profile_integral(
      params, [](double t) { return t * t; }, rel_tol);
  if (i2 <= 0.0) return LogValue::zero();
  return lam * pow(a, 2.0) *
         LogValue::from_log(log_sphere_factor(params.d)) *
         LogValue::from_linear(i2);
}

double gamma2_numeric(const ModelParams& params, double rel_tol) {
  return gamma2_log(params, rel_tol).to_double();
}

std::pair<LogValue, LogValue> variance_bracket_log(const ModelParams& params) {
  const LogValue mean = mean_edges_log(params);
  return {mean + gamma2_bracket_end(params, false),
          mean + gamma2_bracket_end(params, true)};
}

std::pair<double, double> variance_bracket(const ModelParams& params) {
  const auto [lo, hi] = variance_bracket_log(params);
  return {lo.to_double(), hi.to_double()};
}

LogValue variance_quadrature_log(const ModelParams& params, double rel_tol) {
  return mean_edges_log(params) + gamma2_log(params, rel_tol);
}

double gamma3P_integrand_factored(double a) {
  const double q = ((a + 4.0) * a + 2.0) * a * a;
  return std::sqrt(q * (a * a + a));
}

double gamma3P_integrand_expanded(double a) {
  return std::sqrt((((a + 5.0) * a + 6.0) * a + 2.0) * a * a * a);
}

LogValue gamma3P_log(const ModelParams& params, double rel_tol) {
  params.validate();
  const LogValue lam = params.intensity();
  if (lam.is_zero()) return LogValue::zero();
  const LogValue a = a_interior_log(params);
  const double la = a.log_magnitude();
  // Scale a out of the polynomial so the radial integrand stays
  // representable regardless of where a sits in the double range.
  double pow_a;   // exponent of a pulled in front
  double j;
  if (la <= 0.0) {
    const double s = std::exp(la);  // flushes to 0 when a underflows
    pow_a = 1.5;
    j = radial_profile_integral(
        params,
        [s](double t) {
          const double st = s * t;
          return std::sqrt((((st + 5.0) * st + 6.0) * st + 2.0) * t * t * t);
        },
        rel_tol);
  } else {
    const double v = std::exp(-la);
    pow_a = 3.0;
    j = radial_profile_integral(
        params,
        [v](double t) {
          return std::sqrt(((t + 5.0 * v) * t + 6.0 * v * v) * t * t * t * t +
                           2.0 * v * v * v * t * t * t);
        },
        rel_tol);
  }
  if (j <= 0.0) return LogValue::zero();
  return lam * pow(a, pow_a) *
         LogValue::from_log(log_sphere_factor(params.d)) *
         LogValue::from_linear(j);
}

double gamma3P_numeric(const ModelParams& params, double rel_tol) {
  return gamma3P_log(params, rel_tol).to_double();
}

LogValue gamma3N_log(const ModelParams& params, double rel_tol) {
  params.validate();
  const LogValue lam = params.intensity();
  if (lam.is_zero()) return LogValue::zero();
  const LogValue a = a_interior_log(params);
  const LogValue sphere = LogValue::from_log(log_sphere_factor(params.d));
  const auto term = [&](double p, double coeff) {
    const double ip = radial_profile_integral(
        params, [p](double t) { return std::pow(t, p); }, rel_tol);
    if (ip <= 0.0) return LogValue::zero();
    return pow(a, p) * LogValue::from_linear(coeff * ip);
  };
  return lam * sphere * (term(3.0, 1.0) + term(2.0, 3.0) + term(1.0, 1.0));
}

double gamma3N_numeric(const ModelParams& params, double rel_tol) {
  return gamma3N_log(params, rel_tol).to_double();
}

LogValue gamma1_dominating_log(const ModelParams& params) {
  params.validate();
  const LogValue a = a_interior_log(params);
  if (a.is_zero()) return LogValue::zero();
  return sqrt(poly_P_log(a)) * gamma2_bracket_end(params, true);
}

McEstimate gamma1_monte_carlo(const ModelParams& params, std::uint64_t budget,
                              RandomStream stream) {
  params.validate();
  if (budget == 0) throw std::invalid_argument("gamma1_monte_carlo: budget");
  const double lam = params.lambda_linear();
  if (!std::isfinite(lam)) {
    throw std::invalid_argument("gamma1_monte_carlo: intensity not desk-scale");
  }
  if (lam == 0.0) return {0.0, 0.0};
  const int d = params.d;
  const double delta = params.delta;
  const double kappa = geom::unit_ball_volume(d);
  // x1 ~ Unif(B_{1+delta/2}), x2 ~ x1 + Unif(B_{2 delta}),
  // y ~ x1 + Unif(B_delta); the product of the three sampling volumes times
  // lambda^3 turns the triple integral into an expectation.
  const double weight = (lam * kappa * std::pow(1.0 + 0.5 * delta, d)) *
                        (lam * kappa * std::pow(2.0 * delta, d)) *
                        (lam * kappa * std::pow(delta, d));
  const Window outer{{}, 1.0 + 0.5 * delta};
  const Window pair_cell{{}, 2.0 * delta};
  const Window y_cell{{}, delta};
  const auto poly_p = [](double a) {
    return (((a + 6.0) * a + 7.0) * a + 1.0) * a;
  };
  Rng rng(stream);
  std::vector<double> x2(d), y(d);
  double sum = 0.0, sumsq = 0.0;
  for (std::uint64_t s = 0; s < budget; ++s) {
    const auto x1 = uniform_in_ball(d, outer, rng);
    const auto off2 = uniform_in_ball(d, pair_cell, rng);
    const auto offy = uniform_in_ball(d, y_cell, rng);
    for (int k = 0; k < d; ++k) {
      x2[k] = x1[k] + off2[k];
      y[k] = x1[k] + offy[k];
    }
    double val = 0.0;
    if (kernel(x1, y, delta) && kernel(x2, y, delta)) {
      const double a1 = local_mean_A(vec_norm(x1), params);
      const double a2 = local_mean_A(vec_norm(x2), params);
      val = weight * std::pow(poly_p(a1) * poly_p(a2), 0.25);
    }
    sum += val;
    sumsq += val * val;
  }
  const double n = static_cast<double>(budget);
  const double mean = sum / n;
  const double var =
      budget > 1 ? std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0)) : 0.0;
  return {mean, std::sqrt(var / n)};
}

BoundReport tv_bound(const ModelParams& params, double theta,
                     const BoundOptions& options) {
  params.validate();
  if (!(theta > 0.0)) throw std::invalid_argument("tv_bound: theta > 0");
  BoundReport rep;
  rep.params = params;
  rep.theta = theta;
  rep.log_domain = params.d >= options.linear_cutoff;
  rep.variance_mode = options.variance_mode;
  rep.gamma1_mode = options.gamma1_mode;

  rep.mean = mean_edges_log(params);
  std::tie(rep.var_lower, rep.var_upper) = variance_bracket_log(params);
  rep.gamma2 = gamma2_log(params, options.quad_rel_tol);
  rep.var_quadrature = rep.mean + rep.gamma2;
  rep.gamma3p = gamma3P_log(params, options.quad_rel_tol);
  rep.gamma3n = gamma3N_log(params, options.quad_rel_tol);
  switch (options.gamma1_mode) {
    case GammaMode::paperDominating:
      rep.gamma1 = gamma1_dominating_log(params);
      break;
    case GammaMode::monteCarlo: {
      const auto est =
          gamma1_monte_carlo(params, options.mc_budget, options.mc_stream);
      rep.gamma1 = LogValue::from_linear(est.value);
      rep.gamma1_std_error = est.std_error;
      break;
    }
    case GammaMode::numericQuadrature:
      throw std::invalid_argument(
          "tv_bound: gamma1 modes are paper_dominating and monte_carlo");
  }

  const double prefactor = -std::expm1(-theta) / theta;
  const double term_g1 = 2.0 * sqrt(rep.gamma1).to_double();
  const double term_g2 = sqrt(rep.gamma2).to_double();
  const double term_g3 = rep.gamma3p.to_double() / theta;
  const double mean_term = std::fabs(rep.mean.to_double() - theta);
  double var_term;
  if (options.variance_mode == VarianceMode::quadrature) {
    var_term = std::fabs(rep.var_quadrature.to_double() - theta);
  } else {
    var_term = std::max(std::fabs(rep.var_lower.to_double() - theta),
                        std::fabs(rep.var_upper.to_double() - theta));
  }
  rep.tv_bound =
      prefactor * (term_g1 + term_g2 + term_g3 + mean_term + var_term);

  if (!rep.var_quadrature.is_zero()) {
    const double ls = rep.var_quadrature.log_magnitude();
    const double w1 =
        rep.gamma1.is_zero()
            ? 0.0
            : 2.0 * std::exp(0.5 * rep.gamma1.log_magnitude() - ls);
    const double w2 = rep.gamma2.is_zero()
                          ? 0.0
                          : std::exp(0.5 * rep.gamma2.log_magnitude() - ls);
    const double w3 = rep.gamma3n.is_zero()
                          ? 0.0
                          : std::exp(rep.gamma3n.log_magnitude() - 1.5 * ls);
    rep.wasserstein_bound = w1 + w2 + w3;
  }
  return rep;
}

double tv_bound_linear(const ModelParams& params, double theta,
                       const BoundOptions& options) {
  params.validate();
  if (!(theta > 0.0)) throw std::invalid_argument("tv_bound_linear: theta");
  constexpr double kPi = 3.141592653589793238462643383279502884;
  const int d = params.d;
  const double delta = params.delta;
  const double lam = params.lambda_linear();
  const double kappa = std::pow(kPi, 0.5 * d) / std::tgamma(1.0 + 0.5 * d);
  const double a = lam * kappa * std::pow(delta, d);
  const double mean = 0.5 * kappa * kappa * lam * lam * std::pow(delta, d);
  const double sphere = d * kappa;
  const auto radial = [&](const std::function<double(double)>& g) {
    return radial_profile_integral(params, g, options.quad_rel_tol);
  };
  const double gamma2 =
      lam * sphere * a * a * radial([](double t) { return t * t; });
  const double gamma3p = lam * sphere * radial([a](double t) {
    return gamma3P_integrand_expanded(a * t);
  });
  const double g2_upper = std::pow(1.0 + 0.5 * delta, d) * kappa * kappa *
                          kappa * lam * lam * lam * std::pow(delta, 2 * d);
  const double gamma1 =
      std::sqrt((((a + 6.0) * a + 7.0) * a + 1.0) * a) * g2_upper;
  const double var_q = mean + gamma2;
  const double prefactor = -std::expm1(-theta) / theta;
  return prefactor * (2.0 * std::sqrt(gamma1) + std::sqrt(gamma2) +
                      gamma3p / theta + std::fabs(mean - theta) +
                      std::fabs(var_q - theta));
}

double wasserstein_bound(const ModelParams& params,
                         const BoundOptions& options) {
  params.validate();
  const LogValue var_q = variance_quadrature_log(params, options.quad_rel_tol);
  if (var_q.is_zero()) {
    throw std::invalid_argument("wasserstein_bound: zero variance");
  }
  LogValue g1;
  if (options.gamma1_mode == GammaMode::monteCarlo) {
    g1 = LogValue::from_linear(
        gamma1_monte_carlo(params, options.mc_budget, options.mc_stream)
            .value);
  } else {
    g1 = gamma1_dominating_log(params);
  }
  const LogValue g2 = gamma2_log(params, options.quad_rel_tol);
  const LogValue g3n = gamma3N_log(params, options.quad_rel_tol);
  const double ls = var_q.log_magnitude();
  double out = 0.0;
  if (!g1.is_zero()) out += 2.0 * std::exp(0.5 * g1.log_magnitude() - ls);
  if (!g2.is_zero()) out += std::exp(0.5 * g2.log_magnitude() - ls);
  if (!g3n.is_zero()) out += std::exp(g3n.log_magnitude() - 1.5 * ls);
  return out;
}

LambdaSolution solve_lambda(int d, double delta, double theta) {
  if (d < 1 || !(delta > 0.0) || !(theta > 0.0)) {
    throw std::invalid_argument("solve_lambda: positive inputs required");
  }
  const double log_lambda = 0.5 * std::log(2.0 * theta) -
                            geom::log_unit_ball_volume(d) -
                            0.5 * d * std::log(delta);
  return {std::exp(log_lambda), log_lambda};
}

ModelParams calibrated_params(int d, double delta, double theta) {
  const auto sol = solve_lambda(d, delta, theta);
  ModelParams p;
  p.d = d;
  p.delta = delta;
  p.lambda = sol.lambda;
  p.theta = theta;
  p.log_lambda = sol.log_lambda;
  return p;
}

double theorem3_form(const ModelParams& params, double theta, double c1,
                     double c2) {
  params.validate();
  if (!(c1 > 0.0) || !(c2 > 0.0) || !(theta > 0.0)) {
    throw std::invalid_argument("theorem3_form: positive constants required");
  }
  const LogValue a = a_interior_log(params);
  const double first = a.is_zero() ? 0.0 : std::exp(0.5 * a.log_magnitude());
  const double mean = mean_edges(params);
  return c1 * first + c2 * std::fabs(mean - theta);
}

PhaseDiagnostic phase_diagnostic(std::span<const ModelParams> schedule) {
  if (schedule.empty()) {
    throw std::invalid_argument("phase_diagnostic: empty schedule");
  }
  PhaseDiagnostic diag;
  diag.means.reserve(schedule.size());
  for (const auto& p : schedule) diag.means.push_back(mean_edges_log(p));
  if (schedule.size() == 1) return diag;
  const LogValue& first = diag.means.front();
  const LogValue& last = diag.means.back();
  constexpr double tol = 1e-6;
  if (last.is_zero() && first.is_zero()) {
    diag.label = PhaseLabel::stabilizing;
  } else if (last.is_zero()) {
    diag.label = PhaseLabel::vanishing;
  } else if (first.is_zero()) {
    diag.label = PhaseLabel::growing;
  } else {
    const double slope = (last.log_magnitude() - first.log_magnitude()) /
                         static_cast<double>(schedule.size() - 1);
    diag.label = slope > tol    ? PhaseLabel::growing
                 : slope < -tol ? PhaseLabel::vanishing
                                : PhaseLabel::stabilizing;
  }
  return diag;
}

namespace {

nlohmann::json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

nlohmann::json log_or_null(const LogValue& v) {
  if (v.is_zero()) return nullptr;
  return finite_or_null(v.log_magnitude());
}

}  // namespace

std::string BoundReport::to_json() const {
  nlohmann::json j;
  j["d"] = params.d;
  j["delta"] = params.delta;
  j["lambda"] = finite_or_null(params.lambda_linear());
  j["log_lambda"] = params.intensity().is_zero()
                        ? nlohmann::json(nullptr)
                        : finite_or_null(params.intensity().log_magnitude());
  j["theta"] = theta;
  j["mean"] = finite_or_null(mean.to_double());
  j["log_mean"] = log_or_null(mean);
  j["var_lower"] = finite_or_null(var_lower.to_double());
  j["var_upper"] = finite_or_null(var_upper.to_double());
  j["var_quadrature"] = finite_or_null(var_quadrature.to_double());
  j["log_var_quadrature"] = log_or_null(var_quadrature);
  j["gamma1"] = finite_or_null(gamma1.to_double());
  j["log_gamma1"] = log_or_null(gamma1);
  j["gamma1_mode"] = to_string(gamma1_mode);
  j["gamma1_std_error"] = gamma1_std_error;
  j["gamma2"] = finite_or_null(gamma2.to_double());
  j["log_gamma2"] = log_or_null(gamma2);
  j["gamma2_mode"] = to_string(GammaMode::numericQuadrature);
  j["gamma3p"] = finite_or_null(gamma3p.to_double());
  j["log_gamma3p"] = log_or_null(gamma3p);
  j["gamma3p_mode"] = to_string(GammaMode::numericQuadrature);
  j["gamma3n"] = finite_or_null(gamma3n.to_double());
  j["log_gamma3n"] = log_or_null(gamma3n);
  j["gamma3n_mode"] = to_string(GammaMode::numericQuadrature);
  j["variance_mode"] = to_string(variance_mode);
  j["tv_bound"] = finite_or_null(tv_bound);
  j["wasserstein_bound"] =
      wasserstein_bound ? finite_or_null(*wasserstein_bound)
                        : nlohmann::json(nullptr);
  j["log_domain"] = log_domain;
  return j.dump();
}

}  // namespace rgg
