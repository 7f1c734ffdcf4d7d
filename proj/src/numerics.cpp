#include "rgg/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rgg::num {

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

namespace {

// Continued fraction for the incomplete beta function, modified Lentz.
double betacf(double a, double b, double x) {
  constexpr double eps = 1e-15;
  constexpr double fpmin = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < fpmin) d = fpmin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) return h;
  }
  throw std::runtime_error("betacf: continued fraction did not converge");
}

// log of the non-switched branch: I_x(a,b) with x on the convergent side.
double log_ibeta_direct(double a, double b, double x) {
  return a * std::log(x) + b * std::log1p(-x) - std::log(a) -
         log_beta(a, b) + std::log(betacf(a, b, x));
}

}  // namespace

double log_ibeta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("log_ibeta: a,b > 0");
  if (x < 0.0 || x > 1.0) throw std::invalid_argument("log_ibeta: x in [0,1]");
  if (x == 0.0) return -std::numeric_limits<double>::infinity();
  if (x == 1.0) return 0.0;
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return log_ibeta_direct(a, b, x);
  }
  // I_x(a,b) = 1 - I_{1-x}(b,a)
  const double lq = log_ibeta_direct(b, a, 1.0 - x);
  return std::log1p(-std::exp(lq));
}

double ibeta(double a, double b, double x) {
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  return std::exp(log_ibeta(a, b, x));
}

namespace {

double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 1000; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) {
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw std::runtime_error("gamma_p: series did not converge");
}

double gamma_q_cf(double a, double x) {
  constexpr double fpmin = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / fpmin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) {
      return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw std::runtime_error("gamma_q: continued fraction did not converge");
}

}  // namespace

double gamma_p(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw std::invalid_argument("gamma_p: bad args");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw std::invalid_argument("gamma_q: bad args");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

namespace {

double simpson(double fa, double fm, double fb, double a, double b) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_rec(const std::function<double(double)>& f, double a, double b,
                   double fa, double fm, double fb, double whole,
                   double abs_tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(fa, flm, fm, a, m);
  const double right = simpson(fm, frm, fb, m, b);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * abs_tol) {
    return left + right + delta / 15.0;
  }
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * abs_tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * abs_tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = simpson(fa, fm, fb, a, b);
  return simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

double integrate_with_breakpoints(const std::function<double(double)>& f,
                                  double a, double b,
                                  std::vector<double> breakpoints,
                                  double abs_tol) {
  std::vector<double> pts{a};
  std::sort(breakpoints.begin(), breakpoints.end());
  for (double p : breakpoints) {
    if (p > a && p < b && p != pts.back()) pts.push_back(p);
  }
  pts.push_back(b);
  double total = 0.0;
  const double span = b - a;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double share = abs_tol * (pts[i + 1] - pts[i]) / span;
    total += adaptive_simpson(f, pts[i], pts[i + 1], std::max(share, 1e-308));
  }
  return total;
}

double gauss_legendre(const std::function<double(double)>& f, double a,
                      double b, int panels) {
  // 10-point Gauss-Legendre nodes/weights on [-1,1].
  static const double xs[5] = {0.1488743389816312, 0.4333953941292472,
                               0.6794095682990244, 0.8650633666889845,
                               0.9739065285171717};
  static const double ws[5] = {0.2955242247147529, 0.2692667193099963,
                               0.2190863625159820, 0.1494513491505806,
                               0.0666713443086881};
  double total = 0.0;
  const double hw = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * hw;
    const double mid = lo + 0.5 * hw;
    const double half = 0.5 * hw;
    double s = 0.0;
    for (int i = 0; i < 5; ++i) {
      s += ws[i] * (f(mid - half * xs[i]) + f(mid + half * xs[i]));
    }
    total += s * half;
  }
  return total;
}

}  // namespace rgg::num
