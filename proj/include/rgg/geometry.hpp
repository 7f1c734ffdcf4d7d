#pragma once

#include "rgg/logvalue.hpp"

namespace rgg::geom {

// kappa_d = pi^{d/2} / Gamma(1 + d/2); log form has no intermediate
// overflow up to d = 1e6. d = 0 is allowed (kappa_0 = 1) because the cap
// quadrature integrates (d-1)-dimensional cross sections.
double log_unit_ball_volume(int d);
double unit_ball_volume(int d);

// kappa_d divided by its Stirling asymptote (1/sqrt(pi d)) (2 pi e / d)^{d/2};
// tends to 1 from below as d grows.
double stirling_volume_ratio(int d);

// Volume of the spherical cap of the given height cut from a d-ball.
// Closed form via the regularized incomplete beta function.
double cap_volume(int d, double radius, double height);
LogValue log_cap_volume(int d, double radius, double height);

// Independent oracle: 1D adaptive Simpson over (d-1)-ball cross sections,
// absolute tolerance 1e-12 scaled by the ball volume.
double cap_volume_quadrature(int d, double radius, double height);

// Lebesgue volume of the intersection of two d-balls with the given center
// distance; two caps at the radical hyperplane when they properly overlap.
double ball_intersection_volume(int d, double r1, double r2,
                                double center_distance);
LogValue log_ball_intersection_volume(int d, double r1, double r2,
                                      double center_distance);

// V(B_{r1}(x) cap B_{r2}(0)) / V(B_{r1}), for |x| = center_distance.
// Exactly 1 when the first ball is contained in the second; stays
// representable at any d because only log differences are exponentiated.
double ball_intersection_fraction(int d, double r1, double r2,
                                  double center_distance);

}  // namespace rgg::geom
