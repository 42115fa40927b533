#include "beltstab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>
#include <utility>
#include <vector>

#include "beltstab/errors.hpp"
#include "beltstab/quadrature.hpp"

namespace beltstab::oracle {

namespace {

using model::kPi;

struct TwoBody {
  double g1, g2, R1, R2, d, c;
  OracleOptions opt;
  std::size_t evaluations = 0;
  std::unordered_map<double, double> middle_cache;

  // Integral over phi in [0, pi] of the pair Boltzmann factor, hard core removed.
  double angular(double xi1, double xi2) {
    const double r1 = R1 * (1.0 + xi1);
    const double r2 = R2 * (1.0 + xi2);
    const double gap = r1 - r2;
    double phi0 = 0.0;
    if (std::abs(gap) < d) {
      // 4 r1 r2 sin^2(phi0/2) = d^2 - gap^2
      const double s = std::sqrt((d * d - gap * gap) / (4.0 * r1 * r2));
      if (s >= 1.0) return 0.0;
      phi0 = 2.0 * std::asin(s);
    }
    const double free_part = kPi - phi0;
    if (c == 0.0) return free_part;

    const auto excess = [&](double phi) {
      ++evaluations;
      const double sh = std::sin(0.5 * phi);
      const double dist = std::sqrt(gap * gap + 4.0 * r1 * r2 * sh * sh);
      return std::expm1(c / dist);
    };
    std::vector<double> breaks;
    const double scale = std::max(std::abs(gap), d) / std::sqrt(r1 * r2);
    for (double s = scale; phi0 + s < kPi; s *= 2.0) breaks.push_back(phi0 + s);
    quad::Options o;
    o.rel_tol = opt.rel_tol * 1e-3;
    o.abs_floor = 1e-15 * free_part;
    try {
      return free_part + quad::integrate(excess, phi0, kPi, o, breaks).value;
    } catch (const QuadratureError& e) {
      std::ostringstream msg;
      msg << "angular level at xi1 = " << xi1 << ", xi2 = " << xi2 << ": " << e.what();
      throw QuadratureError(msg.str());
    }
  }

  double middle(double xi1) {
    if (auto it = middle_cache.find(xi1); it != middle_cache.end()) return it->second;
    const double lo = std::max(-1.0 + 1e-12, -opt.xi_span / g2);
    const double hi = opt.xi_span / g2;
    const double r1 = R1 * (1.0 + xi1);
    std::vector<double> breaks{(r1 - d) / R2 - 1.0, r1 / R2 - 1.0, (r1 + d) / R2 - 1.0, 0.0};
    std::sort(breaks.begin(), breaks.end());
    const auto f = [&](double xi2) {
      return std::exp(-0.5 * g2 * g2 * xi2 * xi2) * angular(xi1, xi2);
    };
    quad::Options o;
    o.rel_tol = opt.rel_tol * 1e-2;
    double v = 0.0;
    try {
      v = quad::integrate(f, lo, hi, o, breaks).value;
    } catch (const QuadratureError& e) {
      std::ostringstream msg;
      msg << "radial level for body 2 at xi1 = " << xi1 << ": " << e.what();
      throw QuadratureError(msg.str());
    }
    middle_cache.emplace(xi1, v);
    return v;
  }

  quad::Result outer(int power) {
    const double lo = std::max(-1.0 + 1e-12, -opt.xi_span / g1);
    const double hi = opt.xi_span / g1;
    const std::vector<double> breaks{-3.0 / g1, 0.0, 3.0 / g1};
    const auto f = [&](double xi1) {
      return std::pow(xi1, power) * std::exp(-0.5 * g1 * g1 * xi1 * xi1) * middle(xi1);
    };
    quad::Options o;
    o.rel_tol = opt.rel_tol * 1e-1;
    return quad::integrate(f, lo, hi, o, breaks);
  }
};

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(name) + " must be positive");
  }
}

}  // namespace

OracleResult oracle_two_body(double gamma1, double gamma2, double R1, double R2, double d,
                             double coupling, std::size_t body, const OracleOptions& opt) {
  require_positive(gamma1, "gamma1");
  require_positive(gamma2, "gamma2");
  require_positive(R1, "R1");
  require_positive(R2, "R2");
  require_positive(d, "contact distance");
  if (!(coupling >= 0.0)) throw DomainError("coupling must be non-negative");
  if (body > 1) throw DomainError("body index must be 0 or 1");
  if (body == 1) {
    std::swap(gamma1, gamma2);
    std::swap(R1, R2);
  }
  TwoBody tb{gamma1, gamma2, R1, R2, d, coupling, opt, 0, {}};
  const quad::Result num = tb.outer(2);
  const quad::Result den = tb.outer(0);
  OracleResult out;
  out.second_moment = num.value / den.value;
  out.free_value = 1.0 / (gamma1 * gamma1);
  out.error_estimate =
      out.second_moment * (num.error / std::abs(num.value) + den.error / std::abs(den.value));
  out.evaluations = tb.evaluations;
  return out;
}

OracleResult oracle_two_body(const model::StarSystem& system, std::size_t body,
                             const OracleOptions& opt) {
  if (system.size() != 2) throw DomainError("oracle_two_body needs exactly two bodies");
  system.validate();
  const auto& b1 = system.bodies[0];
  const auto& b2 = system.bodies[1];
  const model::PairCoupling pc = model::pair_coupling(b1, b2, system.star_mass);
  return oracle_two_body(b1.gamma, b2.gamma, b1.orbit_radius, b2.orbit_radius,
                         b1.body_radius + b2.body_radius, pc.gamma_ij * pc.r_ij, body, opt);
}

}  // namespace beltstab::oracle
