#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>

#include "rgg/sampling.hpp"

namespace rgg {

enum class Backend { bruteForce, cellGrid };

struct EdgeCountResult {
  std::uint64_t count = 0;
  std::uint64_t pairs_examined = 0;
  Backend backend = Backend::bruteForce;
};

struct EdgeCountOptions {
  std::optional<Backend> force;  // default: grid when worthwhile
  int grid_dimension_cap = 10;   // 3^d neighbor cells defeat the grid above
  std::span<const double> ball_center;  // test region center, origin if empty
};

// 1 iff |x - y| <= delta and the midpoint lies in the unit ball around the
// given center. Closed conditions on squared norms; ties count as edges.
bool kernel(std::span<const double> x, std::span<const double> y, double delta,
            std::span<const double> ball_center = {});

// Number of unordered distinct point pairs with kernel 1.
EdgeCountResult edge_count(const PointConfiguration& config,
                           const ModelParams& params,
                           const EdgeCountOptions& options = {});

// D_x E: number of neighbors of x in the configuration (the definitional
// identity with edge_count(config + x) - edge_count(config) is exercised in
// tests).
std::uint64_t first_difference(const PointConfiguration& config,
                               std::span<const double> x,
                               const ModelParams& params);

// Computed literally by four edge counts (add both, each, neither);
// pathwise equal to kernel(x1, x2) for this statistic.
std::int64_t second_difference(const PointConfiguration& config,
                               std::span<const double> x1,
                               std::span<const double> x2,
                               const ModelParams& params);

// Inclusion-exclusion over eight edge counts; identically zero for a
// second-order U-statistic.
std::int64_t third_difference(const PointConfiguration& config,
                              std::span<const double> x1,
                              std::span<const double> x2,
                              std::span<const double> x3,
                              const ModelParams& params);

// Plain-text format: first line "d n", then n lines of d coordinates.
PointConfiguration load_points(std::istream& in);
void save_points(const PointConfiguration& config, std::ostream& out);

}  // namespace rgg
