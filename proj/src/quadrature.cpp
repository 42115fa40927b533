#include "beltstab/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>
#include <vector>

#include "beltstab/errors.hpp"

namespace beltstab::quad {

Result integrate(const std::function<double(double)>& f, double a, double b, const Options& opt,
                 std::span<const double> breaks) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

  std::vector<double> nodes{a};
  for (double x : breaks) {
    if (x > nodes.back() && x < b) nodes.push_back(x);
  }
  nodes.push_back(b);

  Result total;
  double l1_total = 0.0;
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    double err = 0.0;
    double l1 = 0.0;
    const double piece = GK::integrate(f, nodes[k], nodes[k + 1], opt.max_depth, opt.rel_tol, &err, &l1);
    if (!std::isfinite(piece)) {
      std::ostringstream msg;
      msg << "non-finite integrand on [" << nodes[k] << ", " << nodes[k + 1] << "]";
      throw QuadratureError(msg.str());
    }
    total.value += piece;
    total.error += err;
    l1_total += l1;
  }

  const double target = std::max(opt.rel_tol * std::max(std::abs(total.value), 0.0), opt.abs_floor);
  if (total.error > 10.0 * target && total.error > 1e-300) {
    std::ostringstream msg;
    msg << "adaptive quadrature on [" << a << ", " << b << "] stopped at estimated error "
        << total.error << " (target " << target << ", value " << total.value << ", L1 " << l1_total
        << ", " << nodes.size() - 1 << " panels, depth " << opt.max_depth << ")";
    throw QuadratureError(msg.str());
  }
  return total;
}

}  // namespace beltstab::quad
