#include <doctest.h>

#include <boost/math/tools/minima.hpp>

#include "beltstab/errors.hpp"
#include "beltstab/model.hpp"
#include "support.hpp"

using namespace beltstab;
using namespace beltstab::model;
using support::kG;
using support::rel;

TEST_CASE("effective potential minimum and asymptotics") {
  const double m = 6e24, M = 2e30, J = 2.7e40;
  const double R = J * J / (kG * m * m * M);
  CHECK(circular_radius(J, m, M, kG) == doctest::Approx(R).epsilon(1e-15));
  const double vmin = -kG * kG * m * m * m * M * M / (2.0 * J * J);
  CHECK(rel(effective_potential(R, J, m, M, kG), vmin) < 1e-12);
  CHECK(effective_potential(1e40 * R, J, m, M, kG) < 0.0);
  CHECK(std::abs(effective_potential(1e40 * R, J, m, M, kG)) < 1e-30 * std::abs(vmin));

  const double h = 1e-4 * R;
  const double d = (effective_potential(R + h, J, m, M, kG) - effective_potential(R - h, J, m, M, kG)) / (2 * h);
  const double scale = std::abs(vmin) / R;
  CHECK(std::abs(d) / scale < 1e-7);
}

TEST_CASE("circular radius inversion and golden-section minimiser") {
  const double m = 3.3e23, M = 2e30;
  for (double R0 : {5.8e10, 1.5e11, 7.8e11}) {
    const double J = m * std::sqrt(kG * M * R0);
    CHECK(rel(circular_radius(J, m, M, kG), R0) < 1e-12);
    CHECK(rel(circular_radius(2 * J, m, M, kG), 4 * R0) < 1e-12);
    const auto f = [&](double x) { return effective_potential(x * R0, J, m, M, kG) / (kG * M * m / R0); };
    const auto best = boost::math::tools::brent_find_minima(f, 0.1, 10.0, 52);
    CHECK(std::abs(best.first - 1.0) < 1e-7);
  }
}

TEST_CASE("central potential in xi") {
  const double R = 1.5e11, m = 6e24, M = 2e30;
  const double scale = kG * M * m / R;
  CHECK(rel(central_potential_xi(0.0, R, m, M, kG), -0.5 * scale) < 1e-15);
  CHECK(central_potential_xi(1e12, R, m, M, kG) < 0.0);
  CHECK(std::abs(central_potential_xi(1e12, R, m, M, kG)) < 1e-11 * scale);
  const double h = 1e-4;
  const double d2 = (central_potential_xi(h, R, m, M, kG) - 2 * central_potential_xi(0, R, m, M, kG) +
                     central_potential_xi(-h, R, m, M, kG)) / (h * h);
  CHECK(rel(d2, scale) < 1e-6);
  CHECK_THROWS_AS(central_potential_xi(-1.0, R, m, M, kG), DomainError);
}

TEST_CASE("gaussian exponent and beta_free compose") {
  CHECK(gaussian_exponent(0.0, 50.0) == 0.0);
  CHECK(gaussian_exponent(1.0 / 50.0, 50.0) == doctest::Approx(0.5).epsilon(1e-15));
  const double R = 1.495978707e11, m = 5.9722e24, M = 1.9885e30;
  const double b = beta_free(R, m, M, 50.0, kG);
  CHECK(rel(beta_free(R, m, M, 100.0, kG), 4 * b) < 1e-15);
  CHECK(rel(b * kG * M * m / R, 2500.0) < 1e-14);
  CHECK(rel(b * gaussian_potential(0.01, R, m, M, kG), gaussian_exponent(0.01, 50.0)) < 1e-14);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.9, 3.0), g(1.0, 500.0), lm(20.0, 30.0);
  for (int k = 0; k < 200; ++k) {
    const double xi = u(rng), gamma = g(rng), mass = std::pow(10.0, lm(rng)), orbit = 1e11 * (1 + u(rng) + 1);
    CHECK(rel(beta_free(orbit, mass, M, gamma, kG) * gaussian_potential(xi, orbit, mass, M, kG),
              gaussian_exponent(xi, gamma)) < 1e-13);
  }
}

TEST_CASE("pair coupling reduces for equal bodies and is symmetric") {
  const double M = 2e30, m = 1e21, gamma = 50.0, R = 4e11;
  const auto bi = support::body(0, m, 1e3, R, gamma);
  const auto bj = support::body(1, m, 1e3, R, gamma);
  const PairCoupling p = pair_coupling(bi, bj, M);
  CHECK(rel(p.gamma_ij, (m / M) * (1 + gamma) / 2) < 1e-14);
  CHECK(rel(p.r_ij, R) < 1e-15);
  const double rho = 1e5;
  CHECK(rel(p.gamma_ij * p.r_ij / rho, (gamma + 1) * (m * m / (M * 2 * m)) * R / rho) < 1e-14);

  const auto a = support::body(0, 3e22, 1e3, 2e11, 40.0);
  const auto b = support::body(1, 7e21, 1e3, 5e11, 90.0);
  const PairCoupling ab = pair_coupling(a, b, M), ba = pair_coupling(b, a, M);
  CHECK(ab.gamma_ij == ba.gamma_ij);
  CHECK(ab.r_ij == ba.r_ij);

  auto tiny = b;
  tiny.mass = 1e-30;
  CHECK(pair_coupling(a, tiny, M).gamma_ij < 1e-40);

  auto a2 = a, b2 = b;
  a2.mass *= 3.0;
  b2.mass *= 3.0;
  CHECK(rel(pair_coupling(a2, b2, M).gamma_ij, 3.0 * ab.gamma_ij) < 1e-14);
}

TEST_CASE("positions") {
  const auto b = support::body(0, 1e20, 1e3, 2e11, 50.0);
  const Point2 p0 = position(b, 0.0, 0.0);
  CHECK(p0.x == 2e11);
  CHECK(p0.y == 0.0);
  const Point2 p1 = position(b, 0.1, kPi / 2);
  CHECK(std::abs(p1.x) < 1e-15 * 2e11);
  CHECK(rel(p1.y, 1.1 * 2e11) < 1e-15);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.5, 0.5), t(0.0, kPi);
  for (int k = 0; k < 500; ++k) {
    const double xi = u(rng), th = t(rng);
    const Point2 p = position(b, xi, th);
    CHECK(rel(std::hypot(p.x, p.y), 2e11 * (1 + xi)) < 1e-12);
    const double back_xi = std::hypot(p.x, p.y) / 2e11 - 1.0;
    const double back_th = std::atan2(p.y, p.x);
    CHECK(std::abs(back_xi - xi) < 1e-12);
    CHECK(std::abs(back_th - th) < 1e-12);
  }
}

TEST_CASE("interaction term") {
  PairCoupling p{0, 1, 0.0, 1.0};
  CHECK(interaction_term(p, {1, 0}, {-1, 0}) == 0.0);
  p.gamma_ij = 0.3;
  const double R = 1.0;
  CHECK(interaction_term(p, {R, 0}, {-R, 0}) == doctest::Approx(0.15));
  CHECK(interaction_term(p, {0.5, 0}, {0, 0}) == doctest::Approx(2 * interaction_term(p, {1, 0}, {0, 0})));
}

TEST_CASE("hamiltonian") {
  auto one = support::star();
  one.bodies.push_back(support::body(0, 1e20, 1e3, 1e11, 10.0));
  Configuration c{{0.0}, {0.0}};
  CHECK(hamiltonian(one, c) == 0.0);
  c.xi[0] = 0.1;
  CHECK(hamiltonian(one, c) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(hard_core_ok(one, c));

  auto two = support::star();
  two.bodies.push_back(support::body(0, 1e-300, 1e3, 1e11, 10.0));
  two.bodies.push_back(support::body(1, 1e-300, 1e3, 2e11, 20.0));
  Configuration c2{{0.1, -0.05}, {0.0, 1.0}};
  CHECK(hamiltonian(two, c2) == doctest::Approx(0.5 + 0.5 * 400 * 0.0025).epsilon(1e-12));
}

TEST_CASE("hamiltonian rotation invariance and attraction") {
  auto s = support::star();
  s.bodies.push_back(support::body(0, 6e24, 1e6, 1.0e11, 50.0));
  s.bodies.push_back(support::body(1, 9e24, 1e6, 1.3e11, 70.0));
  s.bodies.push_back(support::body(2, 2e25, 1e6, 1.9e11, 90.0));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.02, 0.02), t(0.0, kTwoPi);
  for (int k = 0; k < 100; ++k) {
    Configuration c{{u(rng), u(rng), u(rng)}, {t(rng), t(rng), t(rng)}};
    const double h = hamiltonian(s, c);
    const double phi = t(rng);
    Configuration r = c;
    for (auto& th : r.theta) th += phi;
    CHECK(std::abs(hamiltonian(s, r) - h) <= 1e-12 * std::abs(h));
  }
  Configuration far{{0, 0, 0}, {0.0, kPi, 0.0}};
  Configuration near{{0, 0, 0}, {0.0, 0.5, 0.0}};
  CHECK(hamiltonian(s, near) < hamiltonian(s, far));
}

TEST_CASE("hard core is a closed condition") {
  auto s = support::star();
  s.bodies.push_back(support::body(0, 1e20, 0.25, 1.0, 10.0));
  s.bodies.push_back(support::body(1, 1e20, 0.25, 1.0, 10.0));
  CHECK_FALSE(hard_core_ok(s, {{0, 0}, {0, 0}}));
  CHECK_THROWS_AS(hamiltonian(s, {{0, 0}, {0, 0}}), HardCoreViolation);
  // distance exactly 0.5 = a_i + a_j
  CHECK(hard_core_ok(s, {{0.0, -0.5}, {0.0, 0.0}}));
}

TEST_CASE("chebyshev stability time") {
  CHECK(chebyshev_stability_time(50.0, 4.5) == doctest::Approx(11250.0));
  CHECK(chebyshev_stability_time(1.0, 3.0) == 3.0);
  CHECK(chebyshev_stability_time(150.0, 1.0) == doctest::Approx(22500.0));
}

TEST_CASE("validation errors") {
  auto s = support::star();
  s.bodies.push_back(support::body(0, -1.0, 1.0, 1.0, 1.0));
  CHECK_THROWS_AS(s.validate(), DomainError);
  CHECK_THROWS_AS(effective_potential(-1.0, 1, 1, 1, kG), DomainError);
}
