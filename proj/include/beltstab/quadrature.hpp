#pragma once

#include <functional>
#include <span>

namespace beltstab::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
};

struct Options {
  double rel_tol = 1e-10;
  unsigned max_depth = 18;
  /// Accept a result whose estimated error is below this absolute floor even
  /// when the relative target is missed (integrals that are numerically zero).
  double abs_floor = 0.0;
};

/// Adaptive 31-point Gauss-Kronrod on [a, b], split at the sorted interior
/// `breaks`. Throws QuadratureError when the error estimate exceeds
/// max(rel_tol * |value|, abs_floor) by more than a factor of 10.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opt = {}, std::span<const double> breaks = {});

}  // namespace beltstab::quad
