#include "rgg/sampling.hpp"

#include <cmath>

#include "rgg/geometry.hpp"

namespace rgg {

void ModelParams::validate() const {
  if (d < 1) throw std::invalid_argument("ModelParams: d >= 1 required");
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument("ModelParams: delta > 0 required");
  }
  if (log_lambda) {
    if (std::isnan(*log_lambda)) {
      throw std::invalid_argument("ModelParams: log_lambda is NaN");
    }
  } else if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("ModelParams: lambda >= 0 required");
  }
  if (theta && !(*theta > 0.0)) {
    throw std::invalid_argument("ModelParams: theta > 0 required when set");
  }
}

LogValue ModelParams::intensity() const {
  if (log_lambda) return LogValue::from_log(*log_lambda);
  return LogValue::from_linear(lambda);
}

double ModelParams::lambda_linear() const {
  if (log_lambda) return std::exp(*log_lambda);
  return lambda;
}

Window edge_count_window(const ModelParams& params) {
  params.validate();
  return Window{{}, 1.0 + 0.5 * params.delta};
}

std::uint64_t poisson_integer(double mean, RandomStream stream) {
  Rng rng(stream);
  return rng.poisson(mean);
}

std::vector<double> uniform_in_ball(int d, const Window& window, Rng& rng) {
  std::vector<double> p(d);
  double norm2;
  do {
    norm2 = 0.0;
    for (int i = 0; i < d; ++i) {
      p[i] = rng.gaussian();
      norm2 += p[i] * p[i];
    }
  } while (norm2 == 0.0);
  const double r = window.radius * std::pow(rng.uniform(), 1.0 / d) /
                   std::sqrt(norm2);
  for (int i = 0; i < d; ++i) {
    p[i] = window.center_coord(i) + p[i] * r;
  }
  return p;
}

PointConfiguration sample_process(const ModelParams& params,
                                  const Window& window, RandomStream stream,
                                  double point_budget) {
  params.validate();
  if (!(window.radius > 0.0)) {
    throw std::invalid_argument("sample_process: window radius > 0");
  }
  const double mean = params.lambda_linear() *
                      geom::unit_ball_volume(params.d) *
                      std::pow(window.radius, params.d);
  if (!std::isfinite(mean) || mean > point_budget) {
    throw InfeasibleError("sample_process: expected point count " +
                          std::to_string(mean) + " exceeds budget " +
                          std::to_string(point_budget));
  }
  Rng rng(stream);
  const std::uint64_t n = rng.poisson(mean);
  PointConfiguration cfg;
  cfg.d = params.d;
  cfg.window = window;
  cfg.coords.reserve(n * static_cast<std::size_t>(params.d));
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto p = uniform_in_ball(params.d, window, rng);
    cfg.coords.insert(cfg.coords.end(), p.begin(), p.end());
  }
  return cfg;
}

}  // namespace rgg
