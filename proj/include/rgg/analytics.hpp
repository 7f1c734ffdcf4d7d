#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rgg/logvalue.hpp"
#include "rgg/rng.hpp"
#include "rgg/sampling.hpp"

namespace rgg {

// Closed-form moments of the first difference operator at a point with
// local mean a = A(x): D_x E is Poisson(a) distributed, so
//   m2 = E[(D_xF)^2], m3abs = E|D_xF|^3, m4 = E[(D_xF)^4],
//   q  = E[(D_xF (D_xF - 1))^2] = m4 - 2 m3abs + m2.
struct MomentReport {
  double a = 0.0;
  double m2 = 0.0;
  double m3abs = 0.0;
  double m4 = 0.0;
  double q = 0.0;
};

MomentReport moment_report(double a);

enum class GammaMode { numericQuadrature, monteCarlo, paperDominating };
enum class VarianceMode { quadrature, bracketWorst };

const char* to_string(GammaMode mode);
const char* to_string(VarianceMode mode);

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

struct BoundOptions {
  GammaMode gamma1_mode = GammaMode::paperDominating;
  VarianceMode variance_mode = VarianceMode::quadrature;
  double quad_rel_tol = 1e-8;
  std::uint64_t mc_budget = 100000;
  RandomStream mc_stream;
  // Linear-domain values are materialized only below this dimension.
  int linear_cutoff = 200;
};

struct BoundReport {
  ModelParams params;
  double theta = 0.0;
  LogValue mean;
  LogValue var_lower, var_upper, var_quadrature;
  LogValue gamma1, gamma2, gamma3p, gamma3n;
  GammaMode gamma1_mode = GammaMode::paperDominating;
  double gamma1_std_error = 0.0;  // only meaningful in monteCarlo mode
  VarianceMode variance_mode = VarianceMode::quadrature;
  double tv_bound = 0.0;
  std::optional<double> wasserstein_bound;
  bool log_domain = false;

  // Flat snake_case JSON (serialized string; keys documented in README).
  std::string to_json() const;
};

// ---- parameter integrals -------------------------------------------------

// A(x) for |x| = x_norm: lambda * 2^d * Vol(B_{delta/2}(x) cap B^d).
// Depends on x through its norm only.
double local_mean_A(double x_norm, const ModelParams& params);
LogValue local_mean_A_log(double x_norm, const ModelParams& params);

// log of kappa_d * lambda * delta^d, the interior value of A.
LogValue a_interior_log(const ModelParams& params);

// B(x1,x2) = lambda * Vol{y : h(x1,y) h(x2,y) = 1}, Monte Carlo; exactly 0
// with no sampling when |x1 - x2| > 2 delta.
McEstimate copair_B(std::span<const double> x1, std::span<const double> x2,
                    const ModelParams& params, std::uint64_t budget,
                    RandomStream stream);

// ---- closed forms and quadratures ----------------------------------------

LogValue mean_edges_log(const ModelParams& params);
double mean_edges(const ModelParams& params);

// mean computed as (lambda/2) * radial quadrature of A; Mecke cross-check.
LogValue mean_edges_quadrature_log(const ModelParams& params,
                                   double rel_tol = 1e-8);

std::pair<LogValue, LogValue> variance_bracket_log(const ModelParams& params);
std::pair<double, double> variance_bracket(const ModelParams& params);

// Exact variance E[F] + int A^2 dmu via radial quadrature.
LogValue variance_quadrature_log(const ModelParams& params,
                                 double rel_tol = 1e-8);

LogValue gamma2_log(const ModelParams& params, double rel_tol = 1e-8);
double gamma2_numeric(const ModelParams& params, double rel_tol = 1e-8);

LogValue gamma3P_log(const ModelParams& params, double rel_tol = 1e-8);
double gamma3P_numeric(const ModelParams& params, double rel_tol = 1e-8);
// Pointwise integrand routes, for the factored-vs-expanded identity.
double gamma3P_integrand_factored(double a);
double gamma3P_integrand_expanded(double a);

LogValue gamma3N_log(const ModelParams& params, double rel_tol = 1e-8);
double gamma3N_numeric(const ModelParams& params, double rel_tol = 1e-8);

// Rigorous upper bound [P(kappa lambda delta^d)]^{1/2} * gamma2 upper bracket.
LogValue gamma1_dominating_log(const ModelParams& params);
// Importance-sampling estimate of the double integral.
McEstimate gamma1_monte_carlo(const ModelParams& params, std::uint64_t budget,
                              RandomStream stream);

// ---- assembled bounds ------------------------------------------------------

BoundReport tv_bound(const ModelParams& params, double theta,
                     const BoundOptions& options = {});
// Same assembly in plain double arithmetic; for log/linear agreement checks.
double tv_bound_linear(const ModelParams& params, double theta,
                       const BoundOptions& options = {});

double wasserstein_bound(const ModelParams& params,
                         const BoundOptions& options = {});

struct LambdaSolution {
  double lambda = 0.0;  // +inf when only the log form is representable
  double log_lambda = 0.0;
};

// lambda = sqrt(2 theta) / (kappa_d delta^{d/2}), log domain.
LambdaSolution solve_lambda(int d, double delta, double theta);
ModelParams calibrated_params(int d, double delta, double theta);

// Rate envelope c1 sqrt(kappa lambda delta^d) + c2 |mean - theta| with
// user-supplied constants.
double theorem3_form(const ModelParams& params, double theta, double c1,
                     double c2);

enum class PhaseLabel { growing, stabilizing, vanishing };
const char* to_string(PhaseLabel label);

struct PhaseDiagnostic {
  std::vector<LogValue> means;
  PhaseLabel label = PhaseLabel::stabilizing;
};

PhaseDiagnostic phase_diagnostic(std::span<const ModelParams> schedule);

}  // namespace rgg
