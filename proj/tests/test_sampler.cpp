#include <doctest.h>

#include <chrono>
#include <cmath>

#include "beltstab/bounds.hpp"
#include "beltstab/errors.hpp"
#include "beltstab/oracle.hpp"
#include "beltstab/sampler.hpp"
#include "beltstab/statistics.hpp"
#include "support.hpp"

using namespace beltstab;
using namespace beltstab::sampler;

namespace {

std::vector<double> xi_of(const std::vector<FreeSample>& s) {
  std::vector<double> x;
  x.reserve(s.size());
  for (const auto& v : s) x.push_back(v.xi);
  return x;
}

GibbsModel free_model(const std::vector<double>& gammas) {
  GibbsModel m;
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    m.gamma.push_back(gammas[i]);
    m.orbit_radius.push_back(1.0 + 0.1 * static_cast<double>(i));
    m.body_radius.push_back(1e-6);
  }
  m.coupling.assign(gammas.size() * gammas.size(), 0.0);
  return m;
}

}  // namespace

TEST_CASE("free gaussian sampling") {
  const auto s = sample_free(50, 1000000, 42);
  const auto x = xi_of(s);
  const double var = stats::variance(x);
  const double se_var = var * std::sqrt(2.0 / (x.size() - 1));
  CHECK(std::abs(var - 1.0 / 2500) < 3 * se_var);
  CHECK(std::abs(stats::mean(x)) < 3 * std::sqrt(var / x.size()));
  for (const auto& v : s) {
    CHECK(v.theta >= 0.0);
    CHECK(v.theta < 2 * M_PI);
    if (v.theta < 0.0) break;
  }
  const auto again = sample_free(50, 1000, 42);
  for (std::size_t i = 0; i < again.size(); ++i) CHECK(again[i].xi == s[i].xi);
}

TEST_CASE("truncated free sampling") {
  for (double g : {50.0, 150.0, 500.0}) {
    const auto x = xi_of(sample_free_truncated(g, 200, 400000, 7));
    const double ratio = stats::mean(std::vector<double>([&] {
                           std::vector<double> sq;
                           for (double v : x) sq.push_back(v * v);
                           return sq;
                         }())) * g * g;
    MESSAGE("truncated <xi^2> gamma^2 at gamma " << g << ": " << ratio);
    CHECK(ratio >= 0.2);
    CHECK(ratio <= 2.5);
    CHECK(ratio == doctest::Approx(bounds::truncated_variance(g, 200) * g * g).epsilon(0.01));
    if (g == 500.0) CHECK(ratio == doctest::Approx(1.0).epsilon(0.01));
    std::size_t tail = 0;
    for (double v : x) {
      tail += std::abs(v) > 0.5;
      CHECK(v > -1.0);
      CHECK(v <= 200.0);
      if (v <= -1.0) break;
    }
    const double allowed = 200 * std::exp(-g * g / 18);
    CHECK(static_cast<double>(tail) / x.size() <= allowed);
  }
  CHECK_THROWS_AS(TruncatedSampler(10, 1e12), SamplingError);
}

TEST_CASE("zero coupling recovers the free variance") {
  const std::vector<double> gammas = {20, 35, 50, 70, 90, 110, 130, 150, 170, 200};
  auto m = free_model(gammas);
  ChainSettings cs;
  cs.steps = 120000;
  cs.burn_in = 10000;
  cs.n_chains = 2;
  cs.seed = 9;
  const auto st = metropolis_run(m, cs);
  CHECK(st.converged);
  CHECK(st.acceptance_xi > 0.2);
  CHECK(st.acceptance_xi < 0.6);
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    const double free = 1 / (gammas[i] * gammas[i]);
    CHECK(std::abs(st.bodies[i].second_moment - free) < 3 * st.bodies[i].second_moment_se);
  }
  const auto eps = empirical_epsilon(st, gammas);
  for (const auto& e : eps) CHECK(std::abs(e.value) < 3 * e.se);
}

TEST_CASE("results do not depend on threading") {
  auto m = free_model({40, 60, 80});
  m.set_pair(0, 1, 1e-4);
  m.set_pair(1, 2, 2e-4);
  ChainSettings cs;
  cs.steps = 20000;
  cs.burn_in = 2000;
  cs.n_chains = 3;
  cs.seed = 5;
  const auto a = metropolis_run(m, cs);
  cs.parallel = false;
  const auto b = metropolis_run(m, cs);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a.bodies[i].second_moment == b.bodies[i].second_moment);
    CHECK(a.bodies[i].second_moment_se == b.bodies[i].second_moment_se);
  }
  CHECK(a.acceptance_xi == b.acceptance_xi);
}

TEST_CASE("hard core is never violated by accepted states") {
  const auto sys = support::two_body(30, 1e-3, 0.05);
  ChainSettings cs;
  cs.steps = 40000;
  cs.burn_in = 4000;
  cs.seed = 3;
  cs.audit_hard_core = true;
  const auto st = metropolis_run(sys, cs);
  CHECK(st.hard_core_rejections > 0);
}

TEST_CASE("infeasible start is rejected") {
  const auto sys = support::two_body(30, 1e-3, 0.05);
  const auto m = GibbsModel::from_system(sys);
  ChainSettings cs;
  cs.steps = 1000;
  cs.burn_in = 100;
  CHECK_THROWS_AS(metropolis_run(m, cs, model::Configuration{{0, 0}, {0, 0}}), SamplingError);
}

TEST_CASE("stationary law of a single wide body is the cut gaussian") {
  // exp(-2 xi^2) on (-1, inf): a normal with sigma 1/2 cut at -2 sigma.
  auto m = free_model({2.0});
  ChainSettings cs;
  cs.steps = 400000;
  cs.burn_in = 20000;
  cs.n_chains = 2;
  cs.seed = 77;
  const auto st = metropolis_run(m, cs);
  const double cut = 0.5 * (1 + std::erf(std::sqrt(2.0)));
  const double expected_mean = 0.5 * std::exp(-2.0) / std::sqrt(2 * M_PI) / cut;
  CHECK(std::abs(st.bodies[0].mean_xi - expected_mean) < 3 * st.bodies[0].mean_xi_se);
}

TEST_CASE("empirical epsilon refuses unconverged statistics") {
  SampleStats st;
  st.bodies.resize(1);
  st.converged = false;
  CHECK_THROWS_AS(empirical_epsilon(st, {1.0}), SamplingError);
}

TEST_CASE("oracle free limit and exchange symmetry") {
  const auto free = oracle::oracle_two_body(80, 80, 1, 1, 1e-4, 0.0, 0);
  CHECK(free.free_value == doctest::Approx(1.0 / 6400));
  CHECK(free.second_moment == doctest::Approx(1.0 / 6400).epsilon(1e-4));
  const auto a = oracle::oracle_two_body(80, 80, 1, 1, 1e-2, 1e-5, 0);
  const auto b = oracle::oracle_two_body(80, 80, 1, 1, 1e-2, 1e-5, 1);
  CHECK(a.second_moment == doctest::Approx(b.second_moment).epsilon(1e-6));
  CHECK(a.second_moment > a.free_value);
  auto sys = support::two_body(80, 1e-4, 0.01);
  sys.bodies.pop_back();
  CHECK_THROWS_AS(oracle::oracle_two_body(sys), DomainError);
}

TEST_CASE("metropolis agrees with the oracle at a weak coupling") {
  const auto sys = support::two_body(100, 1e-6, 1e-2);
  const auto o = oracle::oracle_two_body(sys, 0);
  ChainSettings cs;
  cs.steps = 300000;
  cs.burn_in = 30000;
  cs.n_chains = 4;
  cs.seed = 1234;
  const auto st = metropolis_run(sys, cs);
  CHECK(st.converged);
  const double z = (st.bodies[0].second_moment - o.second_moment) / st.bodies[0].second_moment_se;
  MESSAGE("z = " << z);
  CHECK(std::abs(z) < 3.0);
}
