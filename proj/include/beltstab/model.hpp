#pragma once

// Planar star + N-body model: central potential, free-measure temperature,
// dimensionless pair couplings and the hard-core constrained Hamiltonian.
//
// Conventions: SI units throughout; xi = (rho - R)/R is the relative radial
// deviation of a body from its circular orbit radius R; theta is its angle.

#include <cstddef>
#include <span>
#include <vector>

namespace beltstab::model {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Body {
  std::size_t index = 0;
  double mass = 0.0;          // kg
  double body_radius = 0.0;   // m, hard-core radius a_i
  double orbit_radius = 0.0;  // m, circular orbit radius R_i
  double gamma = 0.0;         // free-measure concentration; sigma(xi) = 1/gamma

  void validate() const;
};

struct StarSystem {
  double star_mass = 0.0;     // kg
  double star_radius = 0.0;   // m
  double grav_const = 0.0;    // m^3 kg^-1 s^-2
  double density = 0.0;       // kg/m^3, common body density
  double star_density = 0.0;  // kg/m^3
  std::vector<Body> bodies;   // sorted by orbit_radius

  std::size_t size() const { return bodies.size(); }

  /// Checks positivity of every field and the orbit-radius ordering.
  /// Throws DomainError.
  void validate() const;

  /// Relative mismatch |m_i - (4/3) pi density a_i^3| / m_i for body i.
  double density_mismatch(std::size_t i) const;
};

struct Configuration {
  std::vector<double> xi;
  std::vector<double> theta;

  std::size_t size() const { return xi.size(); }

  /// N bodies on their circular orbits (xi = 0), angles equally spaced.
  static Configuration circular(std::size_t n);
};

struct PairCoupling {
  std::size_t i = 0;
  std::size_t j = 0;
  double gamma_ij = 0.0;
  double r_ij = 0.0;  // m, sqrt(R_i R_j)
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

double distance(Point2 a, Point2 b);

double effective_potential(double rho, double angular_momentum, double mass, double star_mass,
                           double grav_const);

/// Radius of the circular orbit: the minimiser of effective_potential.
double circular_radius(double angular_momentum, double mass, double star_mass, double grav_const);

/// Central potential in the xi coordinate, (1/2)(kMm/R)(-1 + xi^2/(1+xi)^2).
double central_potential_xi(double xi, double orbit_radius, double mass, double star_mass,
                            double grav_const);

/// Quadratic part (1/2)(kMm/R) xi^2 of the central potential.
double gaussian_potential(double xi, double orbit_radius, double mass, double star_mass,
                          double grav_const);

double gaussian_exponent(double xi, double gamma);

/// Per-body inverse temperature R gamma^2 / (k m M).
double beta_free(double orbit_radius, double mass, double star_mass, double gamma,
                 double grav_const);

PairCoupling pair_coupling(const Body& bi, const Body& bj, double star_mass);

/// All i<j couplings, row-major over (i, j).
std::vector<PairCoupling> pair_couplings(const StarSystem& system);

Point2 position(const Body& body, double xi, double theta);

std::vector<Point2> positions(const StarSystem& system, const Configuration& config);

/// gamma_ij r_ij / |x_i - x_j|; enters the Hamiltonian with a minus sign.
double interaction_term(const PairCoupling& pair, Point2 xi_pos, Point2 xj_pos);
double interaction_term(const PairCoupling& pair, const StarSystem& system,
                        const Configuration& config);

double hamiltonian(const StarSystem& system, const Configuration& config);

bool hard_core_ok(const StarSystem& system, const Configuration& config);

/// gamma^2 tau: Chebyshev estimate of the time an orbit stays within one radius.
double chebyshev_stability_time(double gamma, double period);

}  // namespace beltstab::model
