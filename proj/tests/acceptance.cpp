// Acceptance gate: one self-contained check per shipping criterion, each
// printing a single [PASS]/[FAIL] line with its runtime. Exits nonzero if
// any criterion fails. Oracles here are deliberately independent of the
// library code paths they check (series summation, piecewise closed forms,
// Gauss-Legendre instead of adaptive Simpson, hit-count Monte Carlo).

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <tuple>
#include <vector>

#include "rgg/analytics.hpp"
#include "rgg/experiments.hpp"
#include "rgg/geometry.hpp"
#include "rgg/graph.hpp"
#include "rgg/numerics.hpp"

using namespace rgg;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

std::vector<std::string> g_notes;

void note(const std::string& s) { g_notes.push_back(s); }

bool close_rel(double a, double b, double rel) {
  const double scale = std::max(std::fabs(a), std::fabs(b));
  return std::fabs(a - b) <= rel * std::max(scale, 1e-300);
}

// ---- criterion 1: closed-form moments -------------------------------------

struct SeriesMoments {
  double m2, m3abs, m4, q;
};

SeriesMoments poisson_series_moments(double a) {
  SeriesMoments s{0, 0, 0, 0};
  long double p = std::exp(-static_cast<long double>(a));
  const long double la = a;
  for (std::uint64_t k = 0;; ++k) {
    const long double kk = static_cast<long double>(k);
    s.m2 += static_cast<double>(kk * kk * p);
    s.m3abs += static_cast<double>(kk * kk * kk * p);
    s.m4 += static_cast<double>(kk * kk * kk * kk * p);
    const long double kk1 = kk * (kk - 1.0L);
    s.q += static_cast<double>(kk1 * kk1 * p);
    p *= la / (kk + 1.0L);
    if (kk > la + 40.0L && p * kk * kk * kk * kk < 1e-25L) break;
  }
  return s;
}

bool criterion_moments() {
  for (double a : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    const MomentReport r = moment_report(a);
    const SeriesMoments s = poisson_series_moments(a);
    if (!close_rel(r.m2, s.m2, 1e-10) || !close_rel(r.m3abs, s.m3abs, 1e-10) ||
        !close_rel(r.m4, s.m4, 1e-10) || !close_rel(r.q, s.q, 1e-10)) {
      note("series mismatch at a=" + std::to_string(a));
      return false;
    }
    const auto mc = moment_check(a, 1000000, {20260823, 100});
    if (!mc.pass) {
      note("MC moments out of 4 s.e. at a=" + std::to_string(a));
      return false;
    }
  }
  const MomentReport one = moment_report(1.0);
  if (one.m4 != 15.0 || one.q != 7.0) {
    note("m4(1) or q(1) off the exact integers");
    return false;
  }
  return true;
}

// ---- criterion 2: difference operators ------------------------------------

PointConfiguration random_config(int d, std::size_t n, double radius,
                                 RandomStream stream) {
  Rng rng(stream);
  PointConfiguration c;
  c.d = d;
  c.window = Window{{}, radius};
  for (std::size_t i = 0; i < n; ++i) c.push(uniform_in_ball(d, c.window, rng));
  return c;
}

bool criterion_differences() {
  Rng meta(RandomStream{20260823, 200});
  for (int i = 0; i < 200; ++i) {
    const int d = 1 + static_cast<int>(meta.uniform() * 6.0);
    const std::size_t n = static_cast<std::size_t>(meta.uniform() * 300.0);
    const double delta = 0.05 + meta.uniform() * 0.6;
    auto cfg = random_config(d, n, 1.0 + 0.5 * delta,
                             {20260823, 201 + static_cast<std::uint64_t>(i)});
    ModelParams p{.d = d, .delta = delta, .lambda = 1.0};
    Rng rng(RandomStream{20260823, 401 + static_cast<std::uint64_t>(i)});
    const auto x1 = uniform_in_ball(d, cfg.window, rng);
    const auto x2 = uniform_in_ball(d, cfg.window, rng);
    const auto x3 = uniform_in_ball(d, cfg.window, rng);
    const std::int64_t dd = second_difference(cfg, x1, x2, p);
    if (dd != (kernel(x1, x2, delta) ? 1 : 0)) {
      note("second difference != kernel at config " + std::to_string(i));
      return false;
    }
    if (third_difference(cfg, x1, x2, x3, p) != 0) {
      note("third difference nonzero at config " + std::to_string(i));
      return false;
    }
  }
  return true;
}

// ---- criterion 3: calibrated mean and variance -----------------------------

bool criterion_mean_variance() {
  const ModelParams p = calibrated_params(2, 0.05, 1.0);
  const std::uint64_t reps = 20000;
  const auto dist = run_replications(p, reps, 20260823, {.workers = 4});

  const double emp_mean = dist.mean();
  const double emp_var = dist.variance();
  const double se_mean = std::sqrt(emp_var / static_cast<double>(reps));
  if (std::fabs(emp_mean - 1.0) > 3.0 * se_mean) {
    note("empirical mean " + std::to_string(emp_mean) + " off 1 by >3 s.e.");
    return false;
  }

  // s.e. of the sample variance from the empirical fourth central moment
  double m4c = 0.0;
  for (const auto& [v, c] : dist.count_by_value) {
    const double dv = static_cast<double>(v) - emp_mean;
    m4c += dv * dv * dv * dv * static_cast<double>(c);
  }
  m4c /= static_cast<double>(reps);
  const double se_var = std::sqrt(
      std::max(0.0, m4c - emp_var * emp_var) / static_cast<double>(reps));
  const auto [var_lo, var_hi] = variance_bracket(p);
  if (emp_var < var_lo - 3.0 * se_var || emp_var > var_hi + 3.0 * se_var) {
    note("empirical variance " + std::to_string(emp_var) + " outside [" +
         std::to_string(var_lo) + ", " + std::to_string(var_hi) + "] +- 3 se");
    return false;
  }
  const double vq = variance_quadrature_log(p).to_double();
  if (vq < var_lo * (1.0 - 1e-9) || vq > var_hi * (1.0 + 1e-9)) {
    note("quadrature variance escapes the bracket");
    return false;
  }
  return true;
}

// ---- criterion 4: local mean bracket and volume oracle ---------------------

bool criterion_local_mean() {
  Rng rng(RandomStream{20260823, 300});
  for (int i = 0; i < 1000; ++i) {
    ModelParams p;
    p.d = 1 + static_cast<int>(rng.uniform() * 8.0);
    p.delta = 0.02 + rng.uniform() * 0.6;
    p.lambda = 0.1 + rng.uniform() * 20.0;
    const double r = rng.uniform() * (1.5 + p.delta);
    const double A = local_mean_A(r, p);
    const double a_in = a_interior_log(p).to_double();
    const double lower = r <= 1.0 - 0.5 * p.delta ? a_in : 0.0;
    const double upper = r <= 1.0 + 0.5 * p.delta ? a_in : 0.0;
    if (A < lower * (1.0 - 1e-9) || A > upper * (1.0 + 1e-9)) {
      note("two-sided local-mean bound violated at sample " +
           std::to_string(i));
      return false;
    }
    if (r <= 1.0 - 0.5 * p.delta && !close_rel(A, a_in, 1e-9)) {
      note("interior local mean off kappa lambda delta^d at sample " +
           std::to_string(i));
      return false;
    }
  }

  // Monte Carlo volume oracle at boundary-band radii
  ModelParams p{.d = 3, .delta = 0.3, .lambda = 2.0};
  Rng mc(RandomStream{20260823, 301});
  for (double r : {0.9, 1.0, 1.05, 1.1}) {
    const std::uint64_t n = 50000;
    std::uint64_t hits = 0;
    const Window cell{{}, 0.15};
    for (std::uint64_t i = 0; i < n; ++i) {
      const auto off = uniform_in_ball(3, cell, mc);
      const double x0 = r + off[0];
      if (x0 * x0 + off[1] * off[1] + off[2] * off[2] <= 1.0) ++hits;
    }
    const double cell_vol =
        geom::unit_ball_volume(3) * 0.15 * 0.15 * 0.15;
    const double phat = static_cast<double>(hits) / n;
    const double factor = p.lambda * std::pow(2.0, 3) * cell_vol;
    const double est = factor * phat;
    const double se = factor * std::sqrt(phat * (1.0 - phat) / n);
    if (std::fabs(local_mean_A(r, p) - est) > 3.0 * se + 1e-12) {
      note("local mean off the MC volume oracle at r=" + std::to_string(r));
      return false;
    }
  }
  return true;
}

// ---- criterion 5: total variation sweep ------------------------------------

bool criterion_tv_sweep() {
  const std::vector<double> deltas{0.2, 0.1, 0.05, 0.02};
  SweepOptions opts;
  opts.replication.workers = 4;
  opts.bootstrap_resamples = 1000;
  opts.bootstrap_level = 0.01;
  const auto records = convergence_sweep(deltas, 2, 1.0, 20000, 20260823, opts);
  if (records.size() != deltas.size()) {
    note("sweep dropped records");
    return false;
  }
  double ratio_min = 1e300, ratio_max = 0.0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.skipped) {
      note("sweep entry skipped at delta=" + std::to_string(r.params.delta));
      return false;
    }
    const double half = 0.5 * (r.tv_ci.hi - r.tv_ci.lo);
    if (r.empirical_tv > r.bound.tv_bound + 3.0 * half) {
      note("empirical TV exceeds the assembled bound at delta=" +
           std::to_string(r.params.delta));
      return false;
    }
    if (i > 0) {
      // nonincreasing at the bootstrap level: either the point estimates
      // decrease or the two confidence intervals overlap
      const auto& prev = records[i - 1];
      const bool decreasing = r.empirical_tv <= prev.empirical_tv;
      const bool overlap = r.tv_ci.lo <= prev.tv_ci.hi;
      if (!decreasing && !overlap) {
        note("TV increased beyond bootstrap uncertainty at delta=" +
             std::to_string(r.params.delta));
        return false;
      }
    }
    const double rate = std::sqrt(a_interior_log(r.params).to_double());
    const double ratio = r.empirical_tv / rate;
    ratio_min = std::min(ratio_min, ratio);
    ratio_max = std::max(ratio_max, ratio);
  }
  if (ratio_max > 10.0 * ratio_min) {
    note("TV / sqrt(kappa lambda delta^d) ratio spans more than a factor 10");
    return false;
  }
  return true;
}

// ---- criterion 6: gamma terms ----------------------------------------------

bool criterion_gammas() {
  Rng rng(RandomStream{20260823, 500});
  for (int i = 0; i < 50; ++i) {
    ModelParams p;
    p.d = 1 + static_cast<int>(rng.uniform() * 6.0);
    p.delta = 0.05 + rng.uniform() * 0.5;
    p.lambda = 0.2 + rng.uniform() * 8.0;
    const double g2 = gamma2_numeric(p);
    // (1 -+ delta/2)^d kappa^3 lambda^3 delta^{2d}
    const double bracket_lo =
        std::pow(std::max(0.0, 1.0 - 0.5 * p.delta), p.d) *
        std::pow(geom::unit_ball_volume(p.d), 3) * std::pow(p.lambda, 3) *
        std::pow(p.delta, 2 * p.d);
    const double bracket_hi =
        std::pow(1.0 + 0.5 * p.delta, p.d) *
        std::pow(geom::unit_ball_volume(p.d), 3) * std::pow(p.lambda, 3) *
        std::pow(p.delta, 2 * p.d);
    if (g2 < bracket_lo * (1.0 - 1e-9) || g2 > bracket_hi * (1.0 + 1e-9)) {
      note("gamma2 escaped its bracket at sample " + std::to_string(i));
      return false;
    }
  }

  Rng rng2(RandomStream{20260823, 501});
  for (int i = 0; i < 20; ++i) {
    ModelParams p;
    p.d = 1 + static_cast<int>(rng2.uniform() * 3.0);
    p.delta = 0.05 + rng2.uniform() * 0.35;
    p.lambda = 0.2 + rng2.uniform() * 5.0;
    const double dom = gamma1_dominating_log(p).to_double();
    const auto mc = gamma1_monte_carlo(
        p, 20000, {20260823, 502 + static_cast<std::uint64_t>(i)});
    if (mc.value > dom + 3.0 * mc.std_error) {
      note("MC gamma1 exceeds the dominating bound at sample " +
           std::to_string(i));
      return false;
    }
  }

  for (double a : {1e-10, 1e-4, 0.05, 0.7, 1.0, 3.0, 50.0, 1e5}) {
    if (!close_rel(gamma3P_integrand_factored(a),
                   gamma3P_integrand_expanded(a), 1e-10)) {
      note("gamma3p factored/expanded mismatch at a=" + std::to_string(a));
      return false;
    }
  }

  // d = 1 piecewise closed forms: A is a on [0, 1 - delta/2] and
  // 2 lambda (1 + delta/2 - r) on the band, so the three integrals reduce
  // to polynomials plus one substitution integral done by Gauss-Legendre.
  for (auto [delta, lam] :
       std::vector<std::pair<double, double>>{{0.2, 1.3}, {0.5, 0.6},
                                              {0.08, 4.0}}) {
    ModelParams p{.d = 1, .delta = delta, .lambda = lam};
    const double a = 2.0 * lam * delta;
    const double interior = 1.0 - 0.5 * delta;
    const double band2 = 4.0 * lam * lam * delta * delta * delta / 3.0;
    const double g2_exact = 2.0 * lam * (a * a * interior + band2);
    const double g3n_exact =
        2.0 * lam *
        ((a * a * a + 3.0 * a * a + a) * interior +
         2.0 * lam * lam * lam * delta * delta * delta * delta + 3.0 * band2 +
         lam * delta * delta);
    const auto f = [](double u) { return gamma3P_integrand_expanded(u); };
    const double g3p_exact =
        2.0 * lam * interior * f(a) + num::gauss_legendre(f, 0.0, a, 64);
    if (!close_rel(gamma2_numeric(p), g2_exact, 1e-6) ||
        !close_rel(gamma3N_numeric(p), g3n_exact, 1e-6) ||
        !close_rel(gamma3P_numeric(p), g3p_exact, 1e-6)) {
      note("d=1 piecewise oracle mismatch at delta=" + std::to_string(delta));
      return false;
    }
  }
  return true;
}

// ---- criterion 7: phase diagnostics ----------------------------------------

bool criterion_phases() {
  const auto schedule = [](double rate_shift) {
    std::vector<ModelParams> s;
    for (int n = 1; n <= 8; ++n) {
      ModelParams p = calibrated_params(2, std::pow(2.0, -n), 1.0);
      p.log_lambda = *p.log_lambda + rate_shift * n;
      p.lambda = std::exp(*p.log_lambda);
      s.push_back(p);
    }
    return s;
  };
  if (phase_diagnostic(schedule(0.3)).label != PhaseLabel::growing) {
    note("growing schedule mislabeled");
    return false;
  }
  if (phase_diagnostic(schedule(0.0)).label != PhaseLabel::stabilizing) {
    note("stabilizing schedule mislabeled");
    return false;
  }
  if (phase_diagnostic(schedule(-0.3)).label != PhaseLabel::vanishing) {
    note("vanishing schedule mislabeled");
    return false;
  }
  for (const auto& p : schedule(0.0)) {
    if (!close_rel(mean_edges(p), 1.0, 1e-10)) {
      note("calibrated schedule mean deviates from theta");
      return false;
    }
  }
  return true;
}

// ---- criterion 8: reproducibility and performance ---------------------------

bool criterion_performance() {
  const ModelParams p = calibrated_params(2, 0.1, 1.0);
  const auto r1 = run_replications(p, 1000, 20260823, {.workers = 1});
  const auto r2 = run_replications(p, 1000, 20260823, {.workers = 2});
  const auto r8 = run_replications(p, 1000, 20260823, {.workers = 8});
  if (r1.count_by_value != r2.count_by_value ||
      r1.count_by_value != r8.count_by_value) {
    note("replication results depend on the worker count");
    return false;
  }

  Rng meta(RandomStream{20260823, 600});
  for (int i = 0; i < 500; ++i) {
    const int d = 1 + static_cast<int>(meta.uniform() * 6.0);
    const std::size_t n = static_cast<std::size_t>(meta.uniform() * 250.0);
    const double delta = 0.02 + meta.uniform() * 0.5;
    auto cfg = random_config(d, n, 1.0 + 0.5 * delta,
                             {20260823, 601 + static_cast<std::uint64_t>(i)});
    ModelParams q{.d = d, .delta = delta, .lambda = 1.0};
    const auto brute =
        edge_count(cfg, q, {.force = Backend::bruteForce});
    const auto grid = edge_count(cfg, q, {.force = Backend::cellGrid});
    if (brute.count != grid.count) {
      note("grid and brute-force disagree at config " + std::to_string(i));
      return false;
    }
  }

  // 1e5 points at d=3, delta=0.05 through the cell grid in under 5 s
  auto big = random_config(3, 100000, 1.025, {20260823, 700});
  ModelParams bp{.d = 3, .delta = 0.05, .lambda = 1.0};
  const auto t0 = std::chrono::steady_clock::now();
  const auto res = edge_count(big, bp);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (res.backend != Backend::cellGrid) {
    note("large instance did not route through the cell grid");
    return false;
  }
  if (secs >= 5.0) {
    note("1e5-point edge count took " + std::to_string(secs) + " s");
    return false;
  }
  note("1e5-point grid count: " + std::to_string(secs) + " s, " +
       std::to_string(res.count) + " edges");
  return true;
}

// ---- criterion 9: log-domain soundness --------------------------------------

bool criterion_log_domain() {
  for (int d : {1, 2, 5, 10, 20, 30}) {
    for (double delta : {0.3, 0.1}) {
      const ModelParams p = calibrated_params(d, delta, 1.0);
      const double lv = tv_bound(p, 1.0).tv_bound;
      const double lin = tv_bound_linear(p, 1.0);
      // |mean - theta| is rounding noise (~1e-15) in the plain-double
      // route, so the comparison carries a tiny absolute floor
      if (std::fabs(lv - lin) > 1e-10 * std::max(lv, lin) + 1e-12) {
        note("log/linear mismatch at d=" + std::to_string(d) +
             " delta=" + std::to_string(delta));
        return false;
      }
    }
  }
  for (int d : {100, 300}) {
    double prev = -1.0;
    for (double delta : {0.2, 0.1, 0.05, 0.02}) {
      const ModelParams p = calibrated_params(d, delta, 1.0);
      const BoundReport rep = tv_bound(p, 1.0);
      if (!std::isfinite(rep.tv_bound) || rep.tv_bound < 0.0) {
        note("non-finite bound at d=" + std::to_string(d));
        return false;
      }
      if (!std::isfinite(rep.gamma1.log_magnitude()) ||
          !std::isfinite(rep.gamma2.log_magnitude()) ||
          !std::isfinite(rep.gamma3p.log_magnitude())) {
        note("gamma log magnitudes not finite at d=" + std::to_string(d));
        return false;
      }
      // monotonicity above the ~1e-13 rounding floor of exp(log mean)
      if (prev >= 0.0 && rep.tv_bound > prev + 1e-12) {
        note("bound not monotone in delta at d=" + std::to_string(d));
        return false;
      }
      prev = rep.tv_bound;
    }
  }
  return true;
}

struct Criterion {
  int index;
  const char* name;
  double budget_s;
  bool (*fn)();
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "closed-form moments vs series and Monte Carlo", 30.0,
       criterion_moments},
      {2, "difference operators reduce to the pair kernel", 30.0,
       criterion_differences},
      {3, "calibrated mean and variance bracket", 300.0,
       criterion_mean_variance},
      {4, "local mean bracket and volume oracle", 60.0, criterion_local_mean},
      {5, "total variation sweep against the assembled bound", 900.0,
       criterion_tv_sweep},
      {6, "gamma terms: brackets, dominating bound, 1D oracles", 300.0,
       criterion_gammas},
      {7, "phase diagnostics and calibration identity", 1.0, criterion_phases},
      {8, "worker/backend reproducibility and grid performance", 60.0,
       criterion_performance},
      {9, "log-domain bounds finite, monotone, matching linear", 120.0,
       criterion_log_domain},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    g_notes.clear();
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = c.fn();
    } catch (const std::exception& e) {
      note(std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (secs > c.budget_s) {
      note("runtime " + std::to_string(secs) + " s exceeds budget " +
           std::to_string(c.budget_s) + " s");
      ok = false;
    }
    std::printf("[%s] criterion %d: %s (%.2f s)\n", ok ? "PASS" : "FAIL",
                c.index, c.name, secs);
    for (const auto& n : g_notes) std::printf("       %s\n", n.c_str());
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
