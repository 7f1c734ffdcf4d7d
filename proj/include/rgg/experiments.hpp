#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rgg/analytics.hpp"
#include "rgg/sampling.hpp"

namespace rgg {

// Empirical law of the edge count: value -> number of replicates observing it.
struct EmpiricalDistribution {
  std::map<std::uint64_t, std::uint64_t> count_by_value;
  std::uint64_t replicates = 0;

  void add(std::uint64_t value, std::uint64_t times = 1) {
    count_by_value[value] += times;
    replicates += times;
  }
  double mean() const;
  double variance() const;  // unbiased
  std::uint64_t max_value() const;
};

// Pointwise count sum; associative and commutative.
EmpiricalDistribution merge(std::span<const EmpiricalDistribution> parts);

struct ReplicationOptions {
  int workers = 1;
  double point_budget = 1e7;
};

// One replicate = one sampled process + one edge count. Replicate i draws
// from stream (seed, i), so the result is identical for any worker count.
EmpiricalDistribution run_replications(const ModelParams& params,
                                       std::uint64_t replicates,
                                       std::uint64_t seed,
                                       const ReplicationOptions& options = {});

// 1/2 sum_k |phat_k - pmf_k| with the unobserved Poisson tail beyond
// k_max = max(max observed, theta + 10 sqrt(theta)) added explicitly.
double empirical_tv(const EmpiricalDistribution& dist, double theta);

struct BootstrapCI {
  double lo = 0.0;
  double hi = 0.0;
  std::uint64_t resamples = 0;
  double level = 0.01;
};

BootstrapCI bootstrap_tv_ci(const EmpiricalDistribution& dist, double theta,
                            std::uint64_t resamples, double level,
                            RandomStream stream);

struct MomentCheckReport {
  double a = 0.0;
  std::uint64_t replicates = 0;
  // empirical / expected / z-score for m2, m3, m4, q
  double emp[4] = {0, 0, 0, 0};
  double expected[4] = {0, 0, 0, 0};
  double z[4] = {0, 0, 0, 0};
  bool pass = false;
};

// Draws Poisson(a) samples (the law of D_x E at interior x) and compares the
// empirical moments with the closed forms within 4 standard errors.
MomentCheckReport moment_check(double a, std::uint64_t replicates,
                               RandomStream stream);

struct ExperimentRecord {
  ModelParams params;
  double theta = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t replicates = 0;
  double empirical_mean = 0.0;
  double empirical_variance = 0.0;
  double empirical_tv = 0.0;
  BootstrapCI tv_ci;
  BoundReport bound;
  double wall_clock_seconds = 0.0;
  bool skipped = false;
  std::string skip_reason;

  std::string to_json() const;
};

struct SweepOptions {
  ReplicationOptions replication;
  BoundOptions bound;
  std::uint64_t bootstrap_resamples = 1000;
  double bootstrap_level = 0.01;
  std::ostream* jsonl_sink = nullptr;  // one record per line when set
};

ExperimentRecord run_experiment(const ModelParams& params, double theta,
                                std::uint64_t replicates, std::uint64_t seed,
                                const SweepOptions& options = {});

// One record per delta, lambda solved so the mean is exactly theta;
// an infeasible entry is recorded as skipped, not fatal.
std::vector<ExperimentRecord> convergence_sweep(
    std::span<const double> deltas, int d, double theta,
    std::uint64_t replicates, std::uint64_t seed,
    const SweepOptions& options = {});

extern const char* const kCsvHeader;
void write_csv(std::span<const ExperimentRecord> records, std::ostream& out);

}  // namespace rgg
