#include "rgg/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "rgg/geometry.hpp"
#include "rgg/graph.hpp"

namespace rgg {

double EmpiricalDistribution::mean() const {
  if (replicates == 0) return 0.0;
  double s = 0.0;
  for (const auto& [v, c] : count_by_value) {
    s += static_cast<double>(v) * static_cast<double>(c);
  }
  return s / static_cast<double>(replicates);
}

double EmpiricalDistribution::variance() const {
  if (replicates < 2) return 0.0;
  const double m = mean();
  double s = 0.0;
  for (const auto& [v, c] : count_by_value) {
    const double dv = static_cast<double>(v) - m;
    s += dv * dv * static_cast<double>(c);
  }
  return s / static_cast<double>(replicates - 1);
}

std::uint64_t EmpiricalDistribution::max_value() const {
  return count_by_value.empty() ? 0 : count_by_value.rbegin()->first;
}

EmpiricalDistribution merge(std::span<const EmpiricalDistribution> parts) {
  if (parts.empty()) throw std::invalid_argument("merge: nonempty required");
  EmpiricalDistribution out;
  for (const auto& p : parts) {
    for (const auto& [v, c] : p.count_by_value) out.add(v, c);
  }
  return out;
}

EmpiricalDistribution run_replications(const ModelParams& params,
                                       std::uint64_t replicates,
                                       std::uint64_t seed,
                                       const ReplicationOptions& options) {
  params.validate();
  if (replicates == 0) {
    throw std::invalid_argument("run_replications: replicates > 0");
  }
  const Window window = edge_count_window(params);
  // Probe feasibility once so workers cannot race on the first failure.
  const double expected = params.lambda_linear() *
                          std::exp(geom::log_unit_ball_volume(params.d) +
                                   params.d * std::log(window.radius));
  if (!std::isfinite(expected) || expected > options.point_budget) {
    throw InfeasibleError("run_replications: expected point count " +
                          std::to_string(expected) + " exceeds budget");
  }

  const int workers = std::max(1, options.workers);
  std::vector<EmpiricalDistribution> parts(workers);
  const auto task = [&](int w) {
    for (std::uint64_t i = w; i < replicates; i += workers) {
      const auto cfg = sample_process(params, window, RandomStream{seed, i},
                                      options.point_budget);
      parts[w].add(edge_count(cfg, params).count);
    }
  };
  if (workers == 1) {
    task(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(task, w);
    for (auto& t : pool) t.join();
  }
  return merge(parts);
}

namespace {

double poisson_log_pmf(std::uint64_t k, double theta) {
  return static_cast<double>(k) * std::log(theta) - theta -
         std::lgamma(static_cast<double>(k) + 1.0);
}

}  // namespace

double empirical_tv(const EmpiricalDistribution& dist, double theta) {
  if (dist.replicates == 0) {
    throw std::invalid_argument("empirical_tv: empty distribution");
  }
  if (!(theta > 0.0)) throw std::invalid_argument("empirical_tv: theta > 0");
  const std::uint64_t k_max =
      std::max(dist.max_value(),
               static_cast<std::uint64_t>(
                   std::ceil(theta + 10.0 * std::sqrt(theta))));
  const double n = static_cast<double>(dist.replicates);
  double l1 = 0.0;
  double pmf_sum = 0.0;
  for (std::uint64_t k = 0; k <= k_max; ++k) {
    const double pmf = std::exp(poisson_log_pmf(k, theta));
    pmf_sum += pmf;
    const auto it = dist.count_by_value.find(k);
    const double phat =
        it == dist.count_by_value.end() ? 0.0 : it->second / n;
    l1 += std::fabs(phat - pmf);
  }
  const double tail = std::max(0.0, 1.0 - pmf_sum);
  return std::clamp(0.5 * (l1 + tail), 0.0, 1.0);
}

BootstrapCI bootstrap_tv_ci(const EmpiricalDistribution& dist, double theta,
                            std::uint64_t resamples, double level,
                            RandomStream stream) {
  if (resamples == 0 || !(level > 0.0) || !(level < 1.0)) {
    throw std::invalid_argument("bootstrap_tv_ci: bad configuration");
  }
  // CDF inversion over the replicate index space = resampling replicates
  // with replacement.
  std::vector<std::uint64_t> values;
  std::vector<std::uint64_t> cum;
  values.reserve(dist.count_by_value.size());
  std::uint64_t running = 0;
  for (const auto& [v, c] : dist.count_by_value) {
    running += c;
    values.push_back(v);
    cum.push_back(running);
  }
  const std::uint64_t n = dist.replicates;
  Rng rng(stream);
  std::vector<double> tvs;
  tvs.reserve(resamples);
  for (std::uint64_t r = 0; r < resamples; ++r) {
    EmpiricalDistribution boot;
    for (std::uint64_t i = 0; i < n; ++i) {
      const std::uint64_t u =
          static_cast<std::uint64_t>(rng.uniform() * static_cast<double>(n));
      const auto it = std::upper_bound(cum.begin(), cum.end(), u);
      boot.add(values[static_cast<std::size_t>(it - cum.begin())]);
    }
    tvs.push_back(empirical_tv(boot, theta));
  }
  std::sort(tvs.begin(), tvs.end());
  const auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(tvs.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, tvs.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return tvs[lo] * (1.0 - frac) + tvs[hi] * frac;
  };
  BootstrapCI ci;
  ci.lo = quantile(0.5 * level);
  ci.hi = quantile(1.0 - 0.5 * level);
  ci.resamples = resamples;
  ci.level = level;
  return ci;
}

MomentCheckReport moment_check(double a, std::uint64_t replicates,
                               RandomStream stream) {
  if (!(a > 0.0)) throw std::invalid_argument("moment_check: a > 0");
  if (replicates < 2) throw std::invalid_argument("moment_check: replicates");
  const MomentReport closed = moment_report(a);
  MomentCheckReport rep;
  rep.a = a;
  rep.replicates = replicates;
  rep.expected[0] = closed.m2;
  rep.expected[1] = closed.m3abs;
  rep.expected[2] = closed.m4;
  rep.expected[3] = closed.q;

  Rng rng(stream);
  double sum[4] = {0, 0, 0, 0};
  double sumsq[4] = {0, 0, 0, 0};
  for (std::uint64_t i = 0; i < replicates; ++i) {
    const double k = static_cast<double>(rng.poisson(a));
    const double stat[4] = {k * k, k * k * k, k * k * k * k,
                            (k * (k - 1.0)) * (k * (k - 1.0))};
    for (int j = 0; j < 4; ++j) {
      sum[j] += stat[j];
      sumsq[j] += stat[j] * stat[j];
    }
  }
  const double n = static_cast<double>(replicates);
  rep.pass = true;
  for (int j = 0; j < 4; ++j) {
    rep.emp[j] = sum[j] / n;
    const double var =
        std::max(0.0, (sumsq[j] - n * rep.emp[j] * rep.emp[j]) / (n - 1.0));
    const double se = std::sqrt(var / n);
    rep.z[j] = se > 0.0 ? (rep.emp[j] - rep.expected[j]) / se
                        : (rep.emp[j] == rep.expected[j] ? 0.0 : 1e9);
    if (std::fabs(rep.z[j]) > 4.0) rep.pass = false;
  }
  return rep;
}

ExperimentRecord run_experiment(const ModelParams& params, double theta,
                                std::uint64_t replicates, std::uint64_t seed,
                                const SweepOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentRecord rec;
  rec.params = params;
  rec.theta = theta;
  rec.seed = seed;
  rec.replicates = replicates;
  const auto dist =
      run_replications(params, replicates, seed, options.replication);
  rec.empirical_mean = dist.mean();
  rec.empirical_variance = dist.variance();
  rec.empirical_tv = empirical_tv(dist, theta);
  rec.tv_ci = bootstrap_tv_ci(
      dist, theta, options.bootstrap_resamples, options.bootstrap_level,
      RandomStream{seed, 0x626f6f74ULL});
  rec.bound = tv_bound(params, theta, options.bound);
  rec.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (options.jsonl_sink) *options.jsonl_sink << rec.to_json() << '\n';
  return rec;
}

std::vector<ExperimentRecord> convergence_sweep(std::span<const double> deltas,
                                                int d, double theta,
                                                std::uint64_t replicates,
                                                std::uint64_t seed,
                                                const SweepOptions& options) {
  std::vector<ExperimentRecord> records;
  records.reserve(deltas.size());
  for (double delta : deltas) {
    const ModelParams params = calibrated_params(d, delta, theta);
    try {
      records.push_back(
          run_experiment(params, theta, replicates, seed, options));
    } catch (const InfeasibleError& e) {
      ExperimentRecord skip;
      skip.params = params;
      skip.theta = theta;
      skip.seed = seed;
      skip.replicates = replicates;
      skip.skipped = true;
      skip.skip_reason = e.what();
      if (options.jsonl_sink) *options.jsonl_sink << skip.to_json() << '\n';
      records.push_back(std::move(skip));
    }
  }
  return records;
}

namespace {

nlohmann::json num_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

std::string ExperimentRecord::to_json() const {
  nlohmann::json j = nlohmann::json::parse(bound.to_json());
  if (skipped) {
    j = nlohmann::json::object();
    j["d"] = params.d;
    j["delta"] = params.delta;
    j["lambda"] = num_or_null(params.lambda_linear());
    j["theta"] = theta;
  }
  j["seed"] = seed;
  j["replicates"] = replicates;
  j["emp_mean"] = empirical_mean;
  j["emp_var"] = empirical_variance;
  j["emp_tv"] = empirical_tv;
  j["tv_lo"] = tv_ci.lo;
  j["tv_hi"] = tv_ci.hi;
  j["runtime_s"] = wall_clock_seconds;
  j["skipped"] = skipped;
  if (skipped) j["skip_reason"] = skip_reason;
  return j.dump();
}

const char* const kCsvHeader =
    "d,delta,lambda,theta,replicates,seed,emp_mean,emp_var,emp_tv,tv_lo,"
    "tv_hi,tv_bound,wasserstein_bound,mean_formula,var_lower,var_upper,"
    "gamma1,gamma2,gamma3p,gamma3n,runtime_s";

void write_csv(std::span<const ExperimentRecord> records, std::ostream& out) {
  out << kCsvHeader << '\n';
  std::ostringstream line;
  line.precision(17);
  for (const auto& r : records) {
    if (r.skipped) continue;
    line.str("");
    line << r.params.d << ',' << r.params.delta << ','
         << r.params.lambda_linear() << ',' << r.theta << ',' << r.replicates
         << ',' << r.seed << ',' << r.empirical_mean << ','
         << r.empirical_variance << ',' << r.empirical_tv << ',' << r.tv_ci.lo
         << ',' << r.tv_ci.hi << ',' << r.bound.tv_bound << ','
         << (r.bound.wasserstein_bound ? *r.bound.wasserstein_bound
                                       : std::nan(""))
         << ',' << r.bound.mean.to_double() << ','
         << r.bound.var_lower.to_double() << ','
         << r.bound.var_upper.to_double() << ','
         << r.bound.gamma1.to_double() << ',' << r.bound.gamma2.to_double()
         << ',' << r.bound.gamma3p.to_double() << ','
         << r.bound.gamma3n.to_double() << ',' << r.wall_clock_seconds;
    out << line.str() << '\n';
  }
}

}  // namespace rgg
