#include "rgg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rgg/numerics.hpp"

namespace rgg::geom {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

double log_unit_ball_volume(int d) {
  if (d < 0) throw std::invalid_argument("unit_ball_volume: d >= 0");
  return 0.5 * d * std::log(kPi) - std::lgamma(1.0 + 0.5 * d);
}

double unit_ball_volume(int d) { return std::exp(log_unit_ball_volume(d)); }

double stirling_volume_ratio(int d) {
  if (d < 1) throw std::invalid_argument("stirling_volume_ratio: d >= 1");
  const double log_asym =
      -0.5 * std::log(kPi * d) + 0.5 * d * std::log(2.0 * kPi * std::exp(1.0) / d);
  return std::exp(log_unit_ball_volume(d) - log_asym);
}

LogValue log_cap_volume(int d, double radius, double height) {
  if (d < 1 || !(radius > 0.0)) {
    throw std::invalid_argument("cap_volume: d >= 1 and radius > 0");
  }
  if (!(height >= 0.0) || height > 2.0 * radius) {
    throw std::invalid_argument("cap_volume: height in [0, 2*radius]");
  }
  if (height == 0.0) return LogValue::zero();
  const double log_ball = log_unit_ball_volume(d) + d * std::log(radius);
  if (height >= 2.0 * radius) return LogValue::from_log(log_ball);
  if (height <= radius) {
    // sin^2 of the polar opening angle
    double x = (2.0 * radius * height - height * height) / (radius * radius);
    if (x > 1.0) x = 1.0;
    const double li = num::log_ibeta(0.5 * (d + 1), 0.5, x);
    return LogValue::from_log(std::log(0.5) + li + log_ball);
  }
  // ball minus the complementary cap
  const LogValue rest = log_cap_volume(d, radius, 2.0 * radius - height);
  const double lr = rest.log_magnitude() - log_ball;
  return LogValue::from_log(log_ball + std::log1p(-std::exp(lr)));
}

double cap_volume(int d, double radius, double height) {
  return log_cap_volume(d, radius, height).to_double();
}

double cap_volume_quadrature(int d, double radius, double height) {
  if (d < 1 || !(radius > 0.0)) {
    throw std::invalid_argument("cap_volume_quadrature: d >= 1, radius > 0");
  }
  if (!(height >= 0.0) || height > 2.0 * radius) {
    throw std::invalid_argument("cap_volume_quadrature: height in [0, 2r]");
  }
  if (height == 0.0) return 0.0;
  const double slice = unit_ball_volume(d - 1);
  const double r2 = radius * radius;
  const auto cross_section = [&](double t) {
    const double s = r2 - t * t;
    return s <= 0.0 ? 0.0 : slice * std::pow(s, 0.5 * (d - 1));
  };
  const double ball = unit_ball_volume(d) * std::pow(radius, d);
  return num::adaptive_simpson(cross_section, radius - height, radius,
                               1e-12 * ball);
}

LogValue log_ball_intersection_volume(int d, double r1, double r2,
                                      double center_distance) {
  if (d < 1 || r1 < 0.0 || r2 < 0.0 || center_distance < 0.0) {
    throw std::invalid_argument("ball_intersection_volume: bad arguments");
  }
  if (r1 == 0.0 || r2 == 0.0) return LogValue::zero();
  if (center_distance >= r1 + r2) return LogValue::zero();
  const double rmin = std::min(r1, r2);
  if (center_distance <= std::fabs(r1 - r2)) {
    return LogValue::from_log(log_unit_ball_volume(d) + d * std::log(rmin));
  }
  // Signed distance from the first center to the radical hyperplane.
  const double x1 =
      (center_distance * center_distance + r1 * r1 - r2 * r2) /
      (2.0 * center_distance);
  double h1 = r1 - x1;
  double h2 = r2 - (center_distance - x1);
  h1 = std::clamp(h1, 0.0, 2.0 * r1);
  h2 = std::clamp(h2, 0.0, 2.0 * r2);
  return log_cap_volume(d, r1, h1) + log_cap_volume(d, r2, h2);
}

double ball_intersection_volume(int d, double r1, double r2,
                                double center_distance) {
  return log_ball_intersection_volume(d, r1, r2, center_distance).to_double();
}

double ball_intersection_fraction(int d, double r1, double r2,
                                  double center_distance) {
  if (r1 <= 0.0) throw std::invalid_argument("ball_intersection_fraction");
  if (center_distance + r1 <= r2) return 1.0;
  const LogValue v = log_ball_intersection_volume(d, r1, r2, center_distance);
  if (v.is_zero()) return 0.0;
  const double log_small = log_unit_ball_volume(d) + d * std::log(r1);
  return std::exp(v.log_magnitude() - log_small);
}

}  // namespace rgg::geom
