#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <doctest.h>

#include "rgg/experiments.hpp"

using namespace rgg;

TEST_CASE("empirical distribution summary statistics") {
  EmpiricalDistribution d;
  d.add(1, 2);
  d.add(3);
  d.add(5);
  // values 1,1,3,5: mean 2.5, unbiased variance 11/3
  CHECK(d.replicates == 4);
  CHECK(d.mean() == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(d.variance() == doctest::Approx(11.0 / 3.0).epsilon(1e-14));
  CHECK(d.max_value() == 5);

  EmpiricalDistribution empty;
  CHECK(empty.mean() == 0.0);
  CHECK(empty.variance() == 0.0);
}

TEST_CASE("merge is a pointwise count sum") {
  EmpiricalDistribution a, b;
  a.add(0, 3);
  a.add(2, 1);
  b.add(2, 4);
  b.add(7, 2);
  std::vector<EmpiricalDistribution> parts{a, b};
  const auto m = merge(parts);
  CHECK(m.replicates == 10);
  CHECK(m.count_by_value.at(0) == 3);
  CHECK(m.count_by_value.at(2) == 5);
  CHECK(m.count_by_value.at(7) == 2);
}

TEST_CASE("replication results do not depend on the worker count") {
  const ModelParams p = calibrated_params(2, 0.1, 1.0);
  ReplicationOptions one{.workers = 1};
  ReplicationOptions two{.workers = 2};
  ReplicationOptions eight{.workers = 8};
  const auto r1 = run_replications(p, 500, 99, one);
  const auto r2 = run_replications(p, 500, 99, two);
  const auto r8 = run_replications(p, 500, 99, eight);
  CHECK(r1.count_by_value == r2.count_by_value);
  CHECK(r1.count_by_value == r8.count_by_value);
  CHECK(r1.replicates == 500);
}

TEST_CASE("replication feasibility guard") {
  ModelParams p{.d = 2, .delta = 0.01, .lambda = 1e9};
  CHECK_THROWS_AS(run_replications(p, 10, 0, {.workers = 1}), InfeasibleError);
}

TEST_CASE("total variation against the fitted Poisson law") {
  // point mass at zero: distance to Poisson(theta) is 1 - e^{-theta}
  EmpiricalDistribution at_zero;
  at_zero.add(0, 1000);
  CHECK(empirical_tv(at_zero, 1.0) ==
        doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));

  // a large Poisson(1) sample should be close in total variation
  Rng rng(RandomStream{700, 0});
  EmpiricalDistribution sampled;
  for (int i = 0; i < 20000; ++i) sampled.add(rng.poisson(1.0));
  CHECK(empirical_tv(sampled, 1.0) < 0.05);
  // and far from a badly mis-specified theta
  CHECK(empirical_tv(sampled, 25.0) > 0.9);

  CHECK_THROWS_AS(empirical_tv(EmpiricalDistribution{}, 1.0),
                  std::invalid_argument);
}

TEST_CASE("bootstrap interval brackets the point estimate and is reproducible") {
  Rng rng(RandomStream{701, 0});
  EmpiricalDistribution dist;
  for (int i = 0; i < 5000; ++i) dist.add(rng.poisson(1.2));
  const double tv = empirical_tv(dist, 1.0);
  const auto ci = bootstrap_tv_ci(dist, 1.0, 400, 0.01, {701, 1});
  CHECK(ci.lo <= ci.hi);
  CHECK(ci.lo <= tv * 1.05);
  CHECK(ci.hi >= tv * 0.95);
  CHECK(ci.resamples == 400);
  const auto again = bootstrap_tv_ci(dist, 1.0, 400, 0.01, {701, 1});
  CHECK(ci.lo == again.lo);
  CHECK(ci.hi == again.hi);
}

TEST_CASE("moment check passes on the closed-form grid") {
  for (double a : {0.5, 1.0, 2.0}) {
    const auto rep = moment_check(a, 200000, {702, 0});
    CHECK(rep.pass);
    for (int j = 0; j < 4; ++j) CHECK(std::fabs(rep.z[j]) <= 4.0);
  }
}

TEST_CASE("experiment record fields and json shape") {
  const ModelParams p = calibrated_params(2, 0.2, 1.0);
  SweepOptions opts;
  opts.bootstrap_resamples = 200;
  std::ostringstream jsonl;
  opts.jsonl_sink = &jsonl;
  const auto rec = run_experiment(p, 1.0, 2000, 31, opts);
  CHECK(rec.replicates == 2000);
  CHECK(rec.empirical_mean > 0.3);
  CHECK(rec.empirical_mean < 3.0);
  CHECK(rec.empirical_tv >= 0.0);
  CHECK(rec.empirical_tv <= 1.0);
  CHECK(rec.wall_clock_seconds > 0.0);
  const std::string j = rec.to_json();
  for (const char* key :
       {"\"emp_mean\"", "\"emp_tv\"", "\"tv_lo\"", "\"tv_hi\"",
        "\"tv_bound\"", "\"runtime_s\"", "\"seed\""}) {
    CHECK(j.find(key) != std::string::npos);
  }
  CHECK(jsonl.str() == j + "\n");
}

TEST_CASE("sweep records skipped entries without failing") {
  // second delta forces an astronomically large point count
  const std::vector<double> deltas{0.3, 1e-8};
  SweepOptions opts;
  opts.bootstrap_resamples = 100;
  opts.replication.point_budget = 1e6;
  const auto records = convergence_sweep(deltas, 2, 1.0, 200, 5, opts);
  REQUIRE(records.size() == 2);
  CHECK_FALSE(records[0].skipped);
  CHECK(records[1].skipped);
  CHECK_FALSE(records[1].skip_reason.empty());

  std::ostringstream csv;
  write_csv(records, csv);
  const std::string text = csv.str();
  CHECK(text.rfind(kCsvHeader, 0) == 0);
  // header + one data line (the skipped entry is omitted)
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
}

TEST_CASE("csv header lists the documented columns in order") {
  CHECK(std::string(kCsvHeader) ==
        "d,delta,lambda,theta,replicates,seed,emp_mean,emp_var,emp_tv,tv_lo,"
        "tv_hi,tv_bound,wasserstein_bound,mean_formula,var_lower,var_upper,"
        "gamma1,gamma2,gamma3p,gamma3n,runtime_s");
}
