#include "rgg/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <vector>

namespace rgg {

bool kernel(std::span<const double> x, std::span<const double> y, double delta,
            std::span<const double> ball_center) {
  if (x.size() != y.size() || x.empty()) {
    throw std::invalid_argument("kernel: dimension mismatch");
  }
  if (!ball_center.empty() && ball_center.size() != x.size()) {
    throw std::invalid_argument("kernel: ball center dimension mismatch");
  }
  double dist2 = 0.0;
  double mid2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw std::invalid_argument("kernel: non-finite coordinate");
    }
    const double dx = x[i] - y[i];
    dist2 += dx * dx;
    const double c = ball_center.empty() ? 0.0 : ball_center[i];
    const double m = 0.5 * (x[i] + y[i]) - c;
    mid2 += m * m;
  }
  return dist2 <= delta * delta && mid2 <= 1.0;
}

namespace {

EdgeCountResult edge_count_brute(const PointConfiguration& cfg, double delta,
                                 std::span<const double> center) {
  EdgeCountResult res;
  res.backend = Backend::bruteForce;
  const std::size_t n = cfg.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      ++res.pairs_examined;
      if (kernel(cfg.point(i), cfg.point(j), delta, center)) ++res.count;
    }
  }
  return res;
}

std::uint64_t cell_key(const std::vector<std::int64_t>& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::int64_t v : c) {
    std::uint64_t u = static_cast<std::uint64_t>(v);
    u ^= u >> 30;
    u *= 0xbf58476d1ce4e5b9ULL;
    h = (h ^ u) * 0x100000001b3ULL;
  }
  return h;
}

EdgeCountResult edge_count_grid(const PointConfiguration& cfg, double delta,
                                std::span<const double> center) {
  EdgeCountResult res;
  res.backend = Backend::cellGrid;
  const std::size_t n = cfg.size();
  const int d = cfg.d;
  if (n < 2) return res;

  // Cells of side delta anchored at the coordinate minimum; candidate
  // pairs come from the 3^d neighbor cells. A key collision only merges
  // candidate lists, never drops a true neighbor.
  std::vector<double> mins(d, 0.0);
  for (int k = 0; k < d; ++k) mins[k] = cfg.coords[k];
  for (std::size_t i = 1; i < n; ++i) {
    const auto p = cfg.point(i);
    for (int k = 0; k < d; ++k) mins[k] = std::min(mins[k], p[k]);
  }

  std::vector<std::int64_t> cell_of(n * static_cast<std::size_t>(d));
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> grid;
  grid.reserve(n);
  std::vector<std::int64_t> c(d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = cfg.point(i);
    for (int k = 0; k < d; ++k) {
      c[k] = static_cast<std::int64_t>(std::floor((p[k] - mins[k]) / delta));
      cell_of[i * d + k] = c[k];
    }
    grid[cell_key(c)].push_back(static_cast<std::uint32_t>(i));
  }

  std::vector<std::int64_t> nb(d);
  std::vector<int> off(d, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto pi = cfg.point(i);
    std::fill(off.begin(), off.end(), -1);
    for (;;) {
      for (int k = 0; k < d; ++k) nb[k] = cell_of[i * d + k] + off[k];
      const auto it = grid.find(cell_key(nb));
      if (it != grid.end()) {
        for (std::uint32_t j : it->second) {
          if (j <= i) continue;
          bool same_cell = true;
          for (int k = 0; k < d && same_cell; ++k) {
            same_cell = cell_of[j * static_cast<std::size_t>(d) + k] == nb[k];
          }
          if (!same_cell) continue;  // hash-collided foreign cell
          ++res.pairs_examined;
          if (kernel(pi, cfg.point(j), delta, center)) ++res.count;
        }
      }
      // odometer over {-1,0,1}^d
      int k = 0;
      while (k < d && off[k] == 1) off[k++] = -1;
      if (k == d) break;
      ++off[k];
    }
  }
  return res;
}

PointConfiguration with_extra(const PointConfiguration& cfg,
                              std::initializer_list<std::span<const double>> xs) {
  PointConfiguration out = cfg;
  for (auto x : xs) out.push(x);
  return out;
}

}  // namespace

EdgeCountResult edge_count(const PointConfiguration& config,
                           const ModelParams& params,
                           const EdgeCountOptions& options) {
  if (config.d != params.d) {
    throw std::invalid_argument("edge_count: dimension mismatch");
  }
  params.validate();
  Backend backend;
  if (options.force) {
    backend = *options.force;
  } else {
    backend = (params.d <= options.grid_dimension_cap && config.size() >= 64)
                  ? Backend::cellGrid
                  : Backend::bruteForce;
  }
  return backend == Backend::cellGrid
             ? edge_count_grid(config, params.delta, options.ball_center)
             : edge_count_brute(config, params.delta, options.ball_center);
}

std::uint64_t first_difference(const PointConfiguration& config,
                               std::span<const double> x,
                               const ModelParams& params) {
  if (static_cast<int>(x.size()) != params.d || config.d != params.d) {
    throw std::invalid_argument("first_difference: dimension mismatch");
  }
  std::uint64_t neighbors = 0;
  for (std::size_t i = 0; i < config.size(); ++i) {
    if (kernel(x, config.point(i), params.delta)) ++neighbors;
  }
  return neighbors;
}

std::int64_t second_difference(const PointConfiguration& config,
                               std::span<const double> x1,
                               std::span<const double> x2,
                               const ModelParams& params) {
  const auto count = [&](const PointConfiguration& c) {
    return static_cast<std::int64_t>(edge_count(c, params).count);
  };
  return count(with_extra(config, {x1, x2})) - count(with_extra(config, {x1})) -
         count(with_extra(config, {x2})) + count(config);
}

std::int64_t third_difference(const PointConfiguration& config,
                              std::span<const double> x1,
                              std::span<const double> x2,
                              std::span<const double> x3,
                              const ModelParams& params) {
  const auto count = [&](const PointConfiguration& c) {
    return static_cast<std::int64_t>(edge_count(c, params).count);
  };
  return count(with_extra(config, {x1, x2, x3})) -
         count(with_extra(config, {x1, x2})) -
         count(with_extra(config, {x1, x3})) -
         count(with_extra(config, {x2, x3})) + count(with_extra(config, {x1})) +
         count(with_extra(config, {x2})) + count(with_extra(config, {x3})) -
         count(config);
}

PointConfiguration load_points(std::istream& in) {
  int d = 0;
  std::size_t n = 0;
  if (!(in >> d >> n) || d < 1) {
    throw std::invalid_argument("load_points: expected header 'd n'");
  }
  PointConfiguration cfg;
  cfg.d = d;
  cfg.coords.reserve(n * static_cast<std::size_t>(d));
  double max_norm2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double norm2 = 0.0;
    for (int k = 0; k < d; ++k) {
      double v;
      if (!(in >> v) || !std::isfinite(v)) {
        throw std::invalid_argument("load_points: bad coordinate");
      }
      cfg.coords.push_back(v);
      norm2 += v * v;
    }
    max_norm2 = std::max(max_norm2, norm2);
  }
  cfg.window = Window{{}, std::max(std::sqrt(max_norm2), 1e-12)};
  return cfg;
}

void save_points(const PointConfiguration& config, std::ostream& out) {
  out << config.d << ' ' << config.size() << '\n';
  std::ostringstream line;
  line.precision(17);
  for (std::size_t i = 0; i < config.size(); ++i) {
    line.str("");
    const auto p = config.point(i);
    for (int k = 0; k < config.d; ++k) {
      if (k) line << ' ';
      line << p[k];
    }
    out << line.str() << '\n';
  }
}

}  // namespace rgg
