#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rgg/logvalue.hpp"
#include "rgg/rng.hpp"

namespace rgg {

// The tuple indexing every formula: dimension d, distance parameter delta,
// intensity lambda and (optionally) the target Poisson parameter theta.
// When log_lambda is set it is authoritative; this is how phase-(2)
// intensities beyond the range of double are carried around.
struct ModelParams {
  int d = 1;
  double delta = 0.0;
  double lambda = 0.0;
  std::optional<double> theta;
  std::optional<double> log_lambda;

  void validate() const;

  // lambda as a LogValue (exact zero when lambda == 0)
  LogValue intensity() const;
  // linear lambda; +inf when only the log form is representable
  double lambda_linear() const;
};

// Ball sampling window. An empty center means the origin. For edge-count
// experiments radius = 1 + delta/2: every edge with midpoint in the unit
// ball has both endpoints within that radius, so the truncation is exact.
struct Window {
  std::vector<double> center;  // empty = origin
  double radius = 1.0;

  double center_coord(std::size_t i) const {
    return center.empty() ? 0.0 : center[i];
  }
};

Window edge_count_window(const ModelParams& params);

// Finite realization of the process restricted to a window; flat storage.
struct PointConfiguration {
  int d = 1;
  Window window;
  std::vector<double> coords;

  std::size_t size() const { return coords.empty() ? 0 : coords.size() / d; }
  std::span<const double> point(std::size_t i) const {
    return {coords.data() + i * static_cast<std::size_t>(d),
            static_cast<std::size_t>(d)};
  }
  void push(std::span<const double> p) {
    coords.insert(coords.end(), p.begin(), p.end());
  }
};

// Raised when an expected point count exceeds the desk-scale budget.
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what)
      : std::runtime_error(what) {}
};

std::uint64_t poisson_integer(double mean, RandomStream stream);

std::vector<double> uniform_in_ball(int d, const Window& window, Rng& rng);

// Poisson count with mean lambda * kappa_d * radius^d, then i.i.d. uniform
// points in the window.
PointConfiguration sample_process(const ModelParams& params,
                                  const Window& window, RandomStream stream,
                                  double point_budget = 1e7);

}  // namespace rgg
