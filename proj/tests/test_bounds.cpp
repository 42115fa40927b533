#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <random>

#include "beltstab/bounds.hpp"
#include "beltstab/errors.hpp"
#include "support.hpp"

using namespace beltstab;
using namespace beltstab::bounds;
using support::kAU;
using support::rel;

namespace {

constexpr double kRsun = 6.957e8;
constexpr double kMearth = 5.9722e24;

SimilarBeltParams similar_params(std::uint64_t N) {
  SimilarBeltParams p;
  p.N = N;
  p.a = 1e3;
  p.gamma = 50;
  p.density_ratio = 2;
  p.R = 2.7 * kAU;
  p.R_s = kRsun;
  return p;
}

// A(N) = N / 5e5 exactly: (gamma+1) ratio 5 a^2 R / R_s^3 = 2e-6.
SimilarBeltParams normalised_similar(std::uint64_t N) {
  SimilarBeltParams p;
  p.N = N;
  p.gamma = 1;
  p.density_ratio = 1;
  p.R = 1;
  p.R_s = 1;
  p.a = std::sqrt(2e-7);
  return p;
}

PowerLawBeltParams main_belt(std::uint64_t N) {
  PowerLawBeltParams p;
  p.N = N;
  p.L = 10;
  p.gamma = 50;
  p.density_ratio = 2;
  p.unit_length = 1e3;
  p.R = 2.7 * kAU / p.unit_length;
  p.R_s = kRsun / p.unit_length;
  return p;
}

PlanetChainParams solar(double m_max) {
  PlanetChainParams p;
  p.b = 0.4;
  p.c = 0.3;
  p.a = 2;
  p.i_min = -1;
  p.i_max = 7;
  p.gamma = 150;
  p.k_typical = 30;
  p.M = 1.9885e30;
  p.c2_override = 1.0;
  const double masses[] = {0.33, 4.87, 5.97, 0.642, 9.4e-4, 1898, 568, 86.8, 102};
  const double radii_km[] = {2440, 6052, 6371, 3390, 470, 69911, 58232, 25362, 24622};
  for (int k = 0; k < 9; ++k) {
    p.masses.push_back(masses[k] * 1e24);
    p.planet_radii.push_back(radii_km[k] * 1e3 / kAU);
  }
  return with_max_mass(p, m_max);
}

PlanetChainParams galilean(double ratio) {
  PlanetChainParams p;
  p.b = 0;
  p.c = 421700;
  p.a = std::cbrt(1882709.0 / 421700.0);
  p.i_min = 0;
  p.i_max = 3;
  p.gamma = 150;
  p.k_typical = 30;
  p.M = 1.89813e27;
  p.masses = {8.93e22, 4.80e22, 1.48e23, 1.08e23};
  p.planet_radii = {1821.6, 1560.8, 2631.2, 2410.3};
  p.estimate = PlanetEstimate::tree_enumeration;
  return with_max_mass(p, ratio * p.M);
}

double gk(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

}  // namespace

TEST_CASE("similar constants") {
  const auto k1 = similar_A(similar_params(1000000));
  const auto k2 = similar_A(similar_params(2000000));
  CHECK(rel(k2.A, 2 * k1.A) < 1e-15);
  CHECK(k1.A_bar / k1.A == doctest::Approx(0.8).epsilon(1e-15));
  MESSAGE("similar A at N = 1e6, a = 1 km, R = 2.7 AU: " << k1.A);
  CHECK(k1.A > 0.1);
  CHECK(k1.A < 10.0);
}

TEST_CASE("similar epsilon bound") {
  CHECK(*similar_epsilon_bound(0.0, 0.0).value == 0.0);
  const auto b = similar_epsilon_bound(0.2, 0.16);
  CHECK(*b.value == doctest::Approx(0.360).epsilon(2e-3));
  CHECK(*b.value <= 0.4);
  CHECK(similar_epsilon_bound(1.0, 0.8).diverged());
  CHECK(b.intermediate("A_exp_A_bar") == doctest::Approx(0.2 * std::exp(0.16)));
  CHECK_THROWS_AS(b.intermediate("nope"), std::out_of_range);
}

TEST_CASE("similar bound stays below 2A on (0, 1/5]") {
  for (int k = 1; k <= 1000; ++k) {
    const double A = 0.2 * k / 1000.0;
    const auto b = similar_epsilon_bound(A, 0.8 * A);
    REQUIRE_FALSE(b.diverged());
    CHECK(*b.value <= 2.0 * A);
  }
}

TEST_CASE("similar max N") {
  CHECK(similar_max_N(normalised_similar(1), 1e-9).N == 0);
  CHECK_FALSE(similar_max_N(normalised_similar(1), 1e-9).diagnostic.empty());
  const auto m = similar_max_N(normalised_similar(1), 0.4);
  auto at = [](std::uint64_t n) { return similar_epsilon_bound(normalised_similar(n)); };
  CHECK(*at(m.N).value <= 0.4);
  CHECK((at(m.N + 1).diverged() || *at(m.N + 1).value > 0.4));
  CHECK(m.N >= 100000);
  CHECK(m.N <= 120000);
}

TEST_CASE("power-law classes") {
  CHECK(powerlaw_class_size(4096, 1) == 3072);
  CHECK(powerlaw_class_size(4096, 3) == 192);
  CHECK(powerlaw_class_size(4096, 6) == 3);
  for (int L = 1; L <= 12; ++L) {
    double sum = 0;
    for (int l = 1; l <= L; ++l) {
      sum += powerlaw_class_size(1e6, l);
      if (l > 1) CHECK(powerlaw_class_size(1e6, l) < powerlaw_class_size(1e6, 1));
    }
    CHECK(rel(sum, 1e6 * (1 - std::pow(4.0, -L))) < 1e-14);
  }
  const auto p = main_belt(1000);
  for (int l = 3; l <= 10; ++l) {
    if (l < 10) CHECK(rel(powerlaw_w(l + 1, 1, p), 0.5 * powerlaw_w(l, 1, p)) < 1e-14);
    CHECK(rel(powerlaw_w(l, l, p) / powerlaw_w(l, l - 1, p), 4.0) < 1e-14);
  }
  const double base = p.R / (p.R_s * p.R_s * p.R_s);
  CHECK(rel(powerlaw_w(1, 1, p), 4 * 51 * 2 * base) < 1e-14);
  CHECK_THROWS_AS(powerlaw_w(1, 2, p), DomainError);
}

TEST_CASE("power-law bound for the main belt") {
  const double per_N = powerlaw_A(main_belt(1));
  MESSAGE("main belt A per asteroid: " << per_N);
  CHECK(per_N * 5e5 > 0.1);
  CHECK(per_N * 5e5 < 10.0);
  CHECK(*powerlaw_epsilon_bound(main_belt(1)).value < 1e-4);

  const auto m = powerlaw_max_N(main_belt(1), 1.0);
  MESSAGE("main belt N_max for eps <= 1: " << m.N);
  CHECK(m.N >= 10000);
  CHECK(m.N <= 1000000);
  CHECK(*powerlaw_epsilon_bound(main_belt(m.N)).value <= 1.0);
  CHECK(*powerlaw_epsilon_bound(main_belt(m.N + 1)).value > 1.0);

  const auto huge = powerlaw_max_N(main_belt(1), 1e12);
  const double wall = powerlaw_divergence_A(10);
  CHECK(per_N * static_cast<double>(huge.N) < wall);
  CHECK(powerlaw_epsilon_bound(main_belt(huge.N + 10)).diverged());
  CHECK(wall * 10 * std::exp(wall) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("power-law bound grows with L") {
  auto p = main_belt(50000);
  double last = 0;
  for (int L = 1; L <= 10; ++L) {
    p.L = L;
    const auto b = powerlaw_epsilon_bound(p);
    REQUIRE_FALSE(b.diverged());
    CHECK(*b.value > last);
    last = *b.value;
  }
  p.nu = 2.5;
  CHECK_THROWS_AS(powerlaw_epsilon_bound(p), DomainError);
}

TEST_CASE("small-asteroid tail matches the double integral") {
  for (double nu : {1.5, 2.0, 2.5, 3.0}) {
    const double N1 = 100, amin = 1, pre = 0.37;
    const double amax = std::pow(N1, 1 / nu);
    const double direct = pre * N1 * N1 * nu * nu * gk([&](double a) {
      return std::pow(a, 2 - nu) * gk([&](double b) { return std::pow(b, -nu - 2); }, a, amax);
    }, amin, amax);
    const double closed = small_asteroid_tail_bound(N1, nu, amin, pre);
    CHECK(closed > 0);
    CHECK(rel(closed, direct) < 1e-6);
  }
  CHECK(small_asteroid_tail_bound(1e4, 2, 2, 1) < small_asteroid_tail_bound(1e4, 2, 1, 1));
  CHECK(small_asteroid_tail_bound(1e4, 1.01, 1e-300, 1) > 1e3 * small_asteroid_tail_bound(1e4, 1.01, 1e-3, 1));
  CHECK_THROWS_AS(small_asteroid_tail_bound(1e4, 1.0, 1, 1), DomainError);
}

TEST_CASE("planet constants") {
  const auto k = planet_constants(solar(kMearth));
  CHECK(k.c1 == doctest::Approx(0.3 - 0.4 * 0.7).epsilon(1e-12));
  CHECK(k.c2 == 1.0);
  const auto g = galilean(1e-4);
  const auto kg = planet_constants(g);
  CHECK(rel(kg.c1, g.c * (1 - 2 * 30.0 / 150.0)) < 1e-14);
  CHECK(kg.c2 == g.c);
  CHECK(rel(planet_constants(galilean(2e-4)).c3, 2 * kg.c3) < 1e-14);
}

TEST_CASE("planet epsilon bar") {
  auto p = galilean(1e-12);
  p.estimate = PlanetEstimate::closed_form;
  CHECK(*planets_epsilon_bar(p).value < 1e-6);
  double last = 0;
  for (double r : {1e-6, 1e-5, 1e-4, 3e-4}) {
    const double v = *planets_epsilon_bar(galilean(r)).value;
    CHECK(v > last);
    last = v;
  }
  auto longer = galilean(1e-5);
  longer.i_max = 4;
  longer.masses.push_back(1e22);
  longer.planet_radii.push_back(1000);
  CHECK(*planets_epsilon_bar(longer).value > *planets_epsilon_bar(galilean(1e-5)).value);
  CHECK_THROWS_AS(planets_epsilon_bar(solar(kMearth * 1e3)), DomainError);
}

TEST_CASE("collision condition") {
  const auto tiny = solar(1e-6 * kMearth);
  CHECK(collision_condition(tiny, 0) == doctest::Approx(200.0).epsilon(1e-6));
  const auto p = solar(kMearth);
  for (int i = 4; i < 6; ++i) CHECK(collision_condition(p, i + 1) < collision_condition(p, i));
}

TEST_CASE("solar mass cap") {
  const auto cap = planets_max_mass(solar(kMearth), 1.0);
  MESSAGE("solar cap m/M = " << cap.mass / 1.9885e30 << " binding " << cap.binding);
  CHECK(cap.mass / 1.9885e30 > 3e-7);
  CHECK(cap.mass / 1.9885e30 < 3e-5);
  const auto at = solar(cap.mass);
  CHECK(*planets_epsilon_bar(at).value <= 1.0);
  for (int i = at.i_min; i < at.i_max; ++i) CHECK(collision_condition(at, i) > 0);
  const auto above = solar(cap.mass * 1.01);
  bool fails = planets_epsilon_bar(above).diverged() || *planets_epsilon_bar(above).value > 1.0;
  for (int i = above.i_min; i < above.i_max; ++i) fails = fails || collision_condition(above, i) <= 0;
  CHECK(fails);

  auto wide = solar(kMearth);
  for (auto& r : wide.planet_radii) r *= 2;
  CHECK(planets_max_mass(wide, 1.0).mass >= cap.mass * (1 - 1e-3));
}

TEST_CASE("galilean ratio 1e-4 is 1-stable") {
  const auto p = galilean(1e-4);
  const auto b = planets_bound(p);
  CHECK(*b.value <= 1.0);
  for (int i = p.i_min; i < p.i_max; ++i) CHECK(collision_condition(p, i) > 0);
  CHECK(planets_max_mass(p, 1.0).mass >= 1e-4 * p.M);
}

TEST_CASE("tree bound") {
  CHECK(tree_bound_small_N(1, 0, graphs::EdgeWeights(1)) == 0.0);
  for (double v : {0.0, 0.01, 0.2, 0.5}) {
    CHECK(tree_bound_small_N(2, 0, graphs::EdgeWeights::uniform_v(2, v)) == doctest::Approx(1.25 * v));
  }
  // n = 3 uniform: three pairs with 0, two trees through the extra edge.
  const double v = 0.1;
  const double by_hand = 2 * 1.25 * v + (1.25 * v) * (1.25 * v) * (2 + std::exp(v));
  CHECK(tree_bound_small_N(3, 0, graphs::EdgeWeights::uniform_v(3, v)) == doctest::Approx(by_hand).epsilon(1e-14));
  for (double u : {0.001, 0.01, 0.03, 0.05}) {
    const double e = tree_bound_small_N(4, 0, graphs::EdgeWeights::uniform_v(4, u));
    const auto maj = tree_majorant(4, u);
    REQUIRE_FALSE(maj.diverged());
    CHECK(e <= *maj.value);
  }
  CHECK_THROWS_AS(tree_bound_small_N(3, 0, graphs::EdgeWeights::uniform_v(3, 0.6)), DomainError);
  CHECK_THROWS_AS(tree_bound_small_N(7, 0, graphs::EdgeWeights::uniform_v(7, 0.1)), EnumerationCapError);
}

TEST_CASE("bounds recompute bit for bit from their intermediates") {
  const std::vector<EpsilonBound> all = {
      similar_epsilon_bound(similar_params(12345)),
      similar_epsilon_bound(1.0, 0.8),
      powerlaw_epsilon_bound(main_belt(60000)),
      powerlaw_epsilon_bound(main_belt(600000)),
      planets_bound(solar(1e-7 * 1.9885e30)),
      planets_bound(galilean(1e-4)),
      tree_bound(4, 1, graphs::EdgeWeights::uniform_v(4, 0.07)),
  };
  for (const auto& b : all) {
    const auto r = recompute(b);
    CHECK(r.kind == b.kind);
    CHECK(r.value.has_value() == b.value.has_value());
    if (b.value) CHECK(*r.value == *b.value);
  }
}

TEST_CASE("bounds are monotone in N, gamma, density and coupling") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    auto p = normalised_similar(1 + static_cast<std::uint64_t>(u(rng) * 80000));
    p.gamma = 1 + 100 * u(rng);
    p.density_ratio = 0.1 + 2 * u(rng);
    p.a = std::sqrt(2e-7) * (0.1 + u(rng));
    const auto value = [](const SimilarBeltParams& q) {
      const auto b = similar_epsilon_bound(q);
      return b.diverged() ? INFINITY : *b.value;
    };
    const double v0 = value(p);
    auto q = p;
    q.N += 1 + static_cast<std::uint64_t>(u(rng) * 1000);
    CHECK(value(q) >= v0);
    q = p;
    q.gamma *= 1.1;
    CHECK(value(q) >= v0);
    q = p;
    q.density_ratio *= 1.1;
    CHECK(value(q) >= v0);
    q = p;
    q.a *= 1.1;
    CHECK(value(q) >= v0);

    auto w = main_belt(1 + static_cast<std::uint64_t>(u(rng) * 250000));
    const auto pv = [](const PowerLawBeltParams& x) {
      const auto b = powerlaw_epsilon_bound(x);
      return b.diverged() ? INFINITY : *b.value;
    };
    auto w2 = w;
    w2.N += 100;
    CHECK(pv(w2) >= pv(w));
    w2 = w;
    w2.gamma *= 1.2;
    CHECK(pv(w2) >= pv(w));
  }
}

TEST_CASE("truncated measure") {
  const double z = truncated_partition(500, 200);
  CHECK(rel(z, gaussian_partition_limit(500)) < 1e-3);
  for (double g : {20.0, 50.0, 150.0}) {
    CHECK(truncated_tail_mass(g, 200) <= truncated_tail_bound(g, 200));
  }
  double last = 0;
  for (double A : {0.01, 0.1, 0.6, 2.0, 50.0}) {
    const double zz = truncated_partition(5, A);
    CHECK(zz > last);
    last = zz;
  }
  const double ratio = truncated_variance(500, 200) * 500 * 500;
  CHECK(ratio == doctest::Approx(1.0).epsilon(0.01));
  const double r150 = truncated_variance(150, 200) * 150 * 150;
  CHECK(r150 >= 0.2);
  CHECK(r150 <= 2.5);
  CHECK(truncated_variance(50, 200) * 2500 >= 0.25);
  CHECK(truncated_variance(50, 200) * 2500 <= 2.25);
}
