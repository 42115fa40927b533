#pragma once

#include <cmath>
#include <random>

#include "beltstab/model.hpp"

namespace support {

inline constexpr double kG = 6.67430e-11;
inline constexpr double kMsun = 1.9885e30;
inline constexpr double kAU = 1.495978707e11;

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

inline beltstab::model::Body body(std::size_t index, double mass, double radius, double orbit,
                                  double gamma) {
  beltstab::model::Body b;
  b.index = index;
  b.mass = mass;
  b.body_radius = radius;
  b.orbit_radius = orbit;
  b.gamma = gamma;
  return b;
}

inline beltstab::model::StarSystem star(double star_mass = kMsun) {
  beltstab::model::StarSystem s;
  s.star_mass = star_mass;
  s.star_radius = 6.957e8;
  s.grav_const = kG;
  s.density = 2000.0;
  s.star_density = 1410.0;
  return s;
}

// Two equal bodies on one orbit with pair coupling g12 and contact distance d (units of R).
inline beltstab::model::StarSystem two_body(double gamma, double g12, double d) {
  auto s = star();
  const double m = 2.0 * g12 / (1.0 + gamma) * kMsun;
  s.bodies.push_back(body(0, m, 0.5 * d * kAU, kAU, gamma));
  s.bodies.push_back(body(1, m, 0.5 * d * kAU, kAU, gamma));
  return s;
}

}  // namespace support
