#include "beltstab/model.hpp"

#include <cmath>
#include <string>

#include "beltstab/errors.hpp"

namespace beltstab::model {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(name) + " must be positive and finite, got " +
                      std::to_string(value));
  }
}

void require_xi(double xi) {
  if (!(xi > -1.0)) {
    throw DomainError("xi must exceed -1 (positive orbital radius), got " + std::to_string(xi));
  }
}

}  // namespace

void Body::validate() const {
  require_positive(mass, "body mass");
  require_positive(body_radius, "body radius");
  require_positive(orbit_radius, "orbit radius");
  require_positive(gamma, "gamma");
}

void StarSystem::validate() const {
  require_positive(star_mass, "star mass");
  require_positive(star_radius, "star radius");
  require_positive(grav_const, "gravitational constant");
  require_positive(density, "body density");
  require_positive(star_density, "star density");
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    bodies[i].validate();
    if (i > 0 && bodies[i].orbit_radius < bodies[i - 1].orbit_radius) {
      throw DomainError("bodies must be ordered by orbit radius (body " + std::to_string(i) + ")");
    }
  }
}

double StarSystem::density_mismatch(std::size_t i) const {
  const Body& b = bodies.at(i);
  const double expected = 4.0 / 3.0 * kPi * density * b.body_radius * b.body_radius * b.body_radius;
  return std::abs(b.mass - expected) / b.mass;
}

Configuration Configuration::circular(std::size_t n) {
  Configuration c;
  c.xi.assign(n, 0.0);
  c.theta.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    c.theta[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
  }
  return c;
}

double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

double effective_potential(double rho, double angular_momentum, double mass, double star_mass,
                           double grav_const) {
  require_positive(rho, "rho");
  require_positive(mass, "mass");
  require_positive(star_mass, "star mass");
  const double j2 = angular_momentum * angular_momentum;
  return j2 / (2.0 * mass * rho * rho) - grav_const * star_mass * mass / rho;
}

double circular_radius(double angular_momentum, double mass, double star_mass,
                       double grav_const) {
  require_positive(angular_momentum, "angular momentum");
  require_positive(mass, "mass");
  require_positive(star_mass, "star mass");
  require_positive(grav_const, "gravitational constant");
  return angular_momentum * angular_momentum / (grav_const * mass * mass * star_mass);
}

double central_potential_xi(double xi, double orbit_radius, double mass, double star_mass,
                            double grav_const) {
  require_xi(xi);
  const double scale = grav_const * star_mass * mass / orbit_radius;
  const double q = xi / (1.0 + xi);
  return 0.5 * scale * (-1.0 + q * q);
}

double gaussian_potential(double xi, double orbit_radius, double mass, double star_mass,
                          double grav_const) {
  return 0.5 * grav_const * star_mass * mass / orbit_radius * xi * xi;
}

double gaussian_exponent(double xi, double gamma) { return 0.5 * gamma * gamma * xi * xi; }

double beta_free(double orbit_radius, double mass, double star_mass, double gamma,
                 double grav_const) {
  require_positive(orbit_radius, "orbit radius");
  require_positive(mass, "mass");
  require_positive(star_mass, "star mass");
  require_positive(gamma, "gamma");
  return orbit_radius * gamma * gamma / (grav_const * mass * star_mass);
}

PairCoupling pair_coupling(const Body& bi, const Body& bj, double star_mass) {
  if (bi.index == bj.index) {
    throw DomainError("pair_coupling needs two distinct bodies");
  }
  const Body& lo = bi.index < bj.index ? bi : bj;
  const Body& hi = bi.index < bj.index ? bj : bi;
  const double gi = 1.0 + lo.gamma;
  const double gj = 1.0 + hi.gamma;
  const double r_ij = std::sqrt(lo.orbit_radius * hi.orbit_radius);
  const double denom = lo.mass * hi.orbit_radius * gj + hi.mass * lo.orbit_radius * gi;

  PairCoupling p;
  p.i = lo.index;
  p.j = hi.index;
  p.r_ij = r_ij;
  p.gamma_ij = denom > 0.0 ? (lo.mass * hi.mass / star_mass) * r_ij * gi * gj / denom : 0.0;
  return p;
}

std::vector<PairCoupling> pair_couplings(const StarSystem& system) {
  std::vector<PairCoupling> out;
  const std::size_t n = system.size();
  out.reserve(n * (n > 0 ? n - 1 : 0) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      out.push_back(pair_coupling(system.bodies[i], system.bodies[j], system.star_mass));
    }
  }
  return out;
}

Point2 position(const Body& body, double xi, double theta) {
  require_xi(xi);
  const double rho = body.orbit_radius * (1.0 + xi);
  return {rho * std::cos(theta), rho * std::sin(theta)};
}

std::vector<Point2> positions(const StarSystem& system, const Configuration& config) {
  if (config.xi.size() != system.size() || config.theta.size() != system.size()) {
    throw DomainError("configuration size does not match the number of bodies");
  }
  std::vector<Point2> out(system.size());
  for (std::size_t i = 0; i < system.size(); ++i) {
    out[i] = position(system.bodies[i], config.xi[i], config.theta[i]);
  }
  return out;
}

double interaction_term(const PairCoupling& pair, Point2 xi_pos, Point2 xj_pos) {
  if (pair.gamma_ij == 0.0) return 0.0;
  const double d = distance(xi_pos, xj_pos);
  if (!(d > 0.0)) {
    throw DomainError("interaction_term: coincident bodies " + std::to_string(pair.i) + " and " +
                      std::to_string(pair.j));
  }
  return pair.gamma_ij * pair.r_ij / d;
}

double interaction_term(const PairCoupling& pair, const StarSystem& system,
                        const Configuration& config) {
  const Point2 a = position(system.bodies.at(pair.i), config.xi.at(pair.i), config.theta.at(pair.i));
  const Point2 b = position(system.bodies.at(pair.j), config.xi.at(pair.j), config.theta.at(pair.j));
  return interaction_term(pair, a, b);
}

bool hard_core_ok(const StarSystem& system, const Configuration& config) {
  const auto pts = positions(system, config);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double contact = system.bodies[i].body_radius + system.bodies[j].body_radius;
      if (distance(pts[i], pts[j]) < contact) return false;
    }
  }
  return true;
}

double hamiltonian(const StarSystem& system, const Configuration& config) {
  const auto pts = positions(system, config);
  double h = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    h += gaussian_exponent(config.xi[i], system.bodies[i].gamma);
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const Body& bi = system.bodies[i];
      const Body& bj = system.bodies[j];
      if (distance(pts[i], pts[j]) < bi.body_radius + bj.body_radius) {
        throw HardCoreViolation("bodies " + std::to_string(i) + " and " + std::to_string(j) +
                                " overlap");
      }
      h -= interaction_term(pair_coupling(bi, bj, system.star_mass), pts[i], pts[j]);
    }
  }
  return h;
}

double chebyshev_stability_time(double gamma, double period) {
  require_positive(gamma, "gamma");
  require_positive(period, "period");
  return gamma * gamma * period;
}

}  // namespace beltstab::model
