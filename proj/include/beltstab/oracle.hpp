#pragma once

// Deterministic reference value of <xi_i^2> for two interacting bodies.
//
// With the global rotation integrated out, the measure depends on (xi_1,
// xi_2, phi) with phi = theta_1 - theta_2 in [0, pi] (the integrand is even in
// phi). The hard core removes the band cos(phi) > (rho_1^2 + rho_2^2 - d^2) /
// (2 rho_1 rho_2), d = a_1 + a_2. Each level is adaptive Gauss-Kronrod with
// breakpoints at the band edges.

#include <cstddef>

#include "beltstab/model.hpp"

namespace beltstab::oracle {

struct OracleOptions {
  double rel_tol = 1e-6;   // target for the returned ratio
  double xi_span = 14.0;   // xi integrated over +-xi_span/gamma_i (and above -1)
};

struct OracleResult {
  double second_moment = 0.0;   // <xi_body^2>
  double free_value = 0.0;      // 1/gamma_body^2
  double error_estimate = 0.0;  // absolute, from the outer quadrature
  std::size_t evaluations = 0;  // innermost integrand calls
};

/// Throws DomainError unless the system has exactly two bodies, and
/// QuadratureError (with the failing coordinates) if a level does not converge.
OracleResult oracle_two_body(const model::StarSystem& system, std::size_t body = 0,
                             const OracleOptions& opt = {});

/// Same integral for explicit parameters: free widths gamma_1, gamma_2, orbit
/// radii R_1, R_2, contact distance d and coupling c = gamma_12 r_12.
OracleResult oracle_two_body(double gamma1, double gamma2, double R1, double R2, double d,
                             double coupling, std::size_t body, const OracleOptions& opt = {});

}  // namespace beltstab::oracle
