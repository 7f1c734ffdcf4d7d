#pragma once

#include <functional>
#include <vector>

namespace rgg::num {

double log_beta(double a, double b);

// Regularized incomplete beta I_x(a,b), continued fraction with the usual
// symmetric switch at x = (a+1)/(a+b+2). Converges to ~1e-15.
double ibeta(double a, double b, double x);
// log I_x(a,b); finite for any x in (0,1] even when I_x underflows.
double log_ibeta(double a, double b, double x);

// Regularized lower/upper incomplete gamma.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Upper tail of the chi-square distribution, for goodness-of-fit p-values.
inline double chi_square_sf(double stat, double dof) {
  return gamma_q(0.5 * dof, 0.5 * stat);
}

// Adaptive Simpson with Richardson correction, absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double abs_tol, int max_depth = 48);

// Splits [a,b] at the interior breakpoints and integrates each piece;
// adaptive integrators converge poorly across kinks.
double integrate_with_breakpoints(const std::function<double(double)>& f,
                                  double a, double b,
                                  std::vector<double> breakpoints,
                                  double abs_tol);

// Fixed-order composite Gauss-Legendre (oracle-grade, independent of the
// adaptive Simpson path).
double gauss_legendre(const std::function<double(double)>& f, double a,
                      double b, int panels);

}  // namespace rgg::num
