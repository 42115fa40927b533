#include "beltstab/bounds.hpp"

#include <algorithm>
#include <bit>
#include <boost/math/special_functions/lambert_w.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "beltstab/errors.hpp"
#include "beltstab/partition_scheme.hpp"
#include "beltstab/quadrature.hpp"

namespace beltstab::bounds {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream msg;
    msg << name << " must be positive and finite, got " << v;
    throw DomainError(msg.str());
  }
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

// Largest N in [1, 2^62] with bound(N) finite and <= eps, for a bound that is
// non-decreasing in N.
template <class F>
MaxCount bisect_count(F&& bound, double eps_target) {
  require_positive(eps_target, "eps_target");
  const auto ok = [&](std::uint64_t n) {
    const EpsilonBound b = bound(n);
    return !b.diverged() && *b.value <= eps_target;
  };
  MaxCount out;
  if (!ok(1)) {
    const EpsilonBound b1 = bound(1);
    out.diagnostic = "no N >= 1 qualifies: bound at N = 1 is " +
                     (b1.diverged() ? std::string("diverged") : fmt(*b1.value)) +
                     ", target " + fmt(eps_target);
    return out;
  }
  std::uint64_t lo = 1;
  std::uint64_t hi = 2;
  constexpr std::uint64_t kCeiling = std::uint64_t{1} << 62;
  while (ok(hi)) {
    lo = hi;
    if (hi >= kCeiling) {
      out.N = hi;
      out.diagnostic = "bound stays below target up to N = 2^62";
      return out;
    }
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (ok(mid) ? lo : hi) = mid;
  }
  out.N = lo;
  return out;
}

double similar_value(double A, double A_bar, EpsilonBound& out) {
  const double x = A * std::exp(A_bar);
  out.record("A_exp_A_bar", x);
  if (x >= 1.0) return std::numeric_limits<double>::quiet_NaN();
  return std::exp(A_bar) * x / (1.0 - x);
}

EpsilonBound powerlaw_from(double A, int L) {
  EpsilonBound out;
  out.kind = "powerlaw";
  out.record("A", A);
  out.record("L", static_cast<double>(L));
  const double x = A * static_cast<double>(L) * std::exp(A);
  out.record("A_L_exp_A", x);
  if (x < 1.0) out.value = std::exp(A + 1.0) * x / (1.0 - x);
  return out;
}

EpsilonBound planets_closed_from(double c3, double n, double a) {
  if (!(c3 < 0.5)) {
    throw DomainError("planets_epsilon_bar needs c3 < 1/2, got c3 = " + fmt(c3));
  }
  EpsilonBound out;
  out.kind = "planets";
  out.record("c3", c3);
  out.record("N", n);
  out.record("a", a);
  const double slope = 5.0 / 3.0 * c3 * n * 2.0 / (a - 1.0);
  out.value = std::expm1(slope) * std::exp(n * c3 / (a - 1.0));
  return out;
}

EpsilonBound planets_tree_from(double c3, double n_real, double a) {
  const int n = static_cast<int>(n_real);
  graphs::check_vertex_cap(n, graphs::kMaxIdentityVertices);
  graphs::EdgeWeights vbar(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) vbar.set_v(i, j, c3 * std::pow(a, -static_cast<double>(j - i)));
  }
  EpsilonBound out;
  out.kind = "planets_tree";
  out.record("c3", c3);
  out.record("N", n_real);
  out.record("a", a);
  double worst = 0.0;
  for (int m = 0; m < n; ++m) {
    const double e = tree_bound_small_N(n, m, vbar);
    out.record("epsilon_bar_" + std::to_string(m), e);
    worst = std::max(worst, e);
  }
  out.value = worst;
  return out;
}

}  // namespace

std::string_view to_string(PlanetEstimate e) {
  return e == PlanetEstimate::closed_form ? "closed_form" : "tree_enumeration";
}

PlanetEstimate planet_estimate_from_string(std::string_view s) {
  if (s == "closed_form") return PlanetEstimate::closed_form;
  if (s == "tree_enumeration") return PlanetEstimate::tree_enumeration;
  throw DomainError("unknown planet estimate '" + std::string(s) +
                    "' (expected closed_form or tree_enumeration)");
}

void SimilarBeltParams::validate() const {
  if (N < 1) throw DomainError("N must be at least 1");
  require_positive(a, "a");
  require_positive(gamma, "gamma");
  require_positive(density_ratio, "density_ratio");
  require_positive(R, "R");
  require_positive(R_s, "R_s");
}

void PowerLawBeltParams::validate() const {
  if (N < 1) throw DomainError("N must be at least 1");
  if (!(nu > 1.0)) throw DomainError("nu must exceed 1, got " + fmt(nu));
  if (L < 1) throw DomainError("L must be at least 1");
  require_positive(gamma, "gamma");
  require_positive(density_ratio, "density_ratio");
  require_positive(R, "R");
  require_positive(R_s, "R_s");
  require_positive(unit_length, "unit_length");
}

double PlanetChainParams::orbit(int i) const { return b + c * std::pow(a, i); }

double PlanetChainParams::max_mass() const {
  if (masses.empty()) throw DomainError("planet chain has no masses");
  return *std::max_element(masses.begin(), masses.end());
}

void PlanetChainParams::validate() const {
  if (!(b >= 0.0) || !std::isfinite(b)) throw DomainError("b must be non-negative");
  require_positive(c, "c");
  if (!(a > 1.0) || !std::isfinite(a)) throw DomainError("a must exceed 1, got " + fmt(a));
  if (i_min > i_max) throw DomainError("i_min must not exceed i_max");
  require_positive(gamma, "gamma");
  require_positive(k_typical, "k_typical");
  require_positive(M, "M");
  if (masses.size() != count() || planet_radii.size() != count()) {
    throw DomainError("masses and planet_radii need i_max - i_min + 1 = " +
                      std::to_string(count()) + " entries");
  }
  for (double m : masses) require_positive(m, "planet mass");
  for (double r : planet_radii) require_positive(r, "planet radius");
  if (c2_override) require_positive(*c2_override, "c2");
}

double EpsilonBound::intermediate(std::string_view name) const {
  for (const auto& [k, v] : intermediates) {
    if (k == name) return v;
  }
  throw std::out_of_range("bound '" + kind + "' has no intermediate '" + std::string(name) + "'");
}

EpsilonBound recompute(const EpsilonBound& b) {
  if (b.kind == "similar") return similar_epsilon_bound(b.intermediate("A"), b.intermediate("A_bar"));
  if (b.kind == "powerlaw") {
    return powerlaw_from(b.intermediate("A"), static_cast<int>(b.intermediate("L")));
  }
  if (b.kind == "planets") {
    return planets_closed_from(b.intermediate("c3"), b.intermediate("N"), b.intermediate("a"));
  }
  if (b.kind == "planets_tree") {
    return planets_tree_from(b.intermediate("c3"), b.intermediate("N"), b.intermediate("a"));
  }
  if (b.kind == "tree") {
    const int n = static_cast<int>(b.intermediate("n"));
    graphs::EdgeWeights vbar(n);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        vbar.set_v(i, j, b.intermediate("vbar_" + std::to_string(i) + "_" + std::to_string(j)));
      }
    }
    return tree_bound(n, static_cast<int>(b.intermediate("distinguished")), vbar);
  }
  throw DomainError("cannot recompute a bound of kind '" + b.kind + "'");
}

SimilarConstants similar_A(const SimilarBeltParams& p) {
  p.validate();
  SimilarConstants k;
  k.A = static_cast<double>(p.N) * ((p.gamma + 1.0) * p.density_ratio * 5.0 * p.a * p.a * p.R /
                                    (p.R_s * p.R_s * p.R_s));
  k.A_bar = 4.0 * k.A / 5.0;
  return k;
}

EpsilonBound similar_epsilon_bound(double A, double A_bar) {
  EpsilonBound out;
  out.kind = "similar";
  out.record("A", A);
  out.record("A_bar", A_bar);
  const double v = similar_value(A, A_bar, out);
  if (!std::isnan(v)) out.value = v;
  return out;
}

EpsilonBound similar_epsilon_bound(const SimilarBeltParams& p) {
  const SimilarConstants k = similar_A(p);
  return similar_epsilon_bound(k.A, k.A_bar);
}

MaxCount similar_max_N(SimilarBeltParams p, double eps_target) {
  return bisect_count(
      [&](std::uint64_t n) {
        p.N = n;
        return similar_epsilon_bound(p);
      },
      eps_target);
}

double powerlaw_class_size(double N, int l) {
  if (l < 1) throw DomainError("class index l must be at least 1");
  return 3.0 * N / std::pow(4.0, l);
}

double powerlaw_w(int l, int m, const PowerLawBeltParams& p) {
  if (m < 1 || l > p.L) throw DomainError("class indices must satisfy 1 <= m <= l <= L");
  if (l < m) throw DomainError("powerlaw_w needs l >= m (order the classes)");
  const double base = (p.gamma + 1.0) * p.density_ratio * p.R / (p.R_s * p.R_s * p.R_s);
  if (l == m) return base * std::pow(4.0, l);
  return base * std::pow(4.0, m) * std::pow(2.0, -(l - m - 1));
}

double powerlaw_A(const PowerLawBeltParams& p) {
  p.validate();
  return p.gamma * p.density_ratio * (3.0 * p.R / (p.R_s * p.R_s * p.R_s)) *
         static_cast<double>(p.N);
}

EpsilonBound powerlaw_epsilon_bound(const PowerLawBeltParams& p) {
  if (p.nu != 2.0) {
    throw DomainError("powerlaw_epsilon_bound implements the nu = 2 class construction only");
  }
  return powerlaw_from(powerlaw_A(p), p.L);
}

MaxCount powerlaw_max_N(PowerLawBeltParams p, double eps_target) {
  return bisect_count(
      [&](std::uint64_t n) {
        p.N = n;
        return powerlaw_epsilon_bound(p);
      },
      eps_target);
}

double powerlaw_divergence_A(int L) {
  if (L < 1) throw DomainError("L must be at least 1");
  return boost::math::lambert_w0(1.0 / static_cast<double>(L));
}

double small_asteroid_tail_bound(double N1, double nu, double a_min, double coupling_prefactor) {
  if (!(nu > 1.0)) throw DomainError("small_asteroid_tail_bound needs nu > 1, got " + fmt(nu));
  require_positive(N1, "N1");
  require_positive(a_min, "a_min");
  if (!(coupling_prefactor >= 0.0)) throw DomainError("coupling prefactor must be non-negative");
  const double a_max = std::pow(N1, 1.0 / nu);
  if (!(a_max > a_min)) {
    throw DomainError("a_max = N1^(1/nu) = " + fmt(a_max) + " must exceed a_min = " + fmt(a_min));
  }
  const double p = 2.0 - 2.0 * nu;
  const double first = (std::pow(N1, p / nu) - std::pow(a_min, p)) / p;
  double second = 0.0;
  if (nu == 3.0) {
    second = std::pow(N1, -(nu + 1.0) / nu) * std::log(a_max / a_min);
  } else {
    second = (std::pow(N1, p / nu) - std::pow(a_min, 3.0 - nu) * std::pow(N1, -(nu + 1.0) / nu)) /
             (3.0 - nu);
  }
  return coupling_prefactor * nu * nu * N1 * N1 / (nu + 1.0) * (first - second);
}

PlanetConstants planet_constants(const PlanetChainParams& p) {
  p.validate();
  PlanetConstants k;
  k.c1 = p.c - 2.0 * p.k_typical / p.gamma * (p.c + p.b);
  if (!(k.c1 > 0.0)) {
    throw DomainError("typicality band exceeds orbital gap: c1 = " + fmt(k.c1));
  }
  k.c2 = p.c2_override ? *p.c2_override : p.c + p.b / std::pow(p.a, p.i_min);
  k.c3 = 2.0 * p.a * p.gamma / (p.a - 1.0) * (p.max_mass() / p.M) * (k.c2 / k.c1);
  return k;
}

namespace {

void record_chain(EpsilonBound& out, const PlanetChainParams& p, const PlanetConstants& k) {
  out.record("c1", k.c1);
  out.record("c2", k.c2);
  out.record("m_max", p.max_mass());
  out.record("m_max_over_M", p.max_mass() / p.M);
}

}  // namespace

EpsilonBound planets_epsilon_bar(const PlanetChainParams& p) {
  const PlanetConstants k = planet_constants(p);
  EpsilonBound out = planets_closed_from(k.c3, static_cast<double>(p.count()), p.a);
  record_chain(out, p, k);
  return out;
}

EpsilonBound planets_epsilon_bar_explicit(const PlanetChainParams& p) {
  const PlanetConstants k = planet_constants(p);
  EpsilonBound out = planets_tree_from(k.c3, static_cast<double>(p.count()), p.a);
  record_chain(out, p, k);
  return out;
}

EpsilonBound planets_bound(const PlanetChainParams& p) {
  return p.estimate == PlanetEstimate::closed_form ? planets_epsilon_bar(p)
                                                   : planets_epsilon_bar_explicit(p);
}

double collision_condition(const PlanetChainParams& p, int i) {
  if (i < p.i_min || i >= p.i_max) {
    throw DomainError("collision index " + std::to_string(i) + " outside [i_min, i_max - 1]");
  }
  const PlanetConstants k = planet_constants(p);
  const std::size_t idx = static_cast<std::size_t>(i - p.i_min);
  const double contact = p.planet_radii[idx] + p.planet_radii[idx + 1];
  return 2.0 * p.k_typical * p.k_typical / 9.0 -
         k.c3 * k.c1 * std::pow(p.a, i) * (p.a - 1.0) / (p.a * contact);
}

PlanetChainParams with_max_mass(PlanetChainParams p, double m_max) {
  require_positive(m_max, "m_max");
  const double scale = m_max / p.max_mass();
  for (double& m : p.masses) m *= scale;
  // Pin the largest exactly so c3 sees m_max and not a rounded product.
  *std::max_element(p.masses.begin(), p.masses.end()) = m_max;
  return p;
}

MassCap planets_max_mass(const PlanetChainParams& p, double eps_target) {
  require_positive(eps_target, "eps_target");
  p.validate();
  const auto check = [&](double m, std::string& reason) {
    const PlanetChainParams q = with_max_mass(p, m);
    try {
      const EpsilonBound b = planets_bound(q);
      if (b.diverged() || *b.value > eps_target) {
        reason = "epsilon_bar";
        return false;
      }
    } catch (const DomainError&) {
      reason = "c3";
      return false;
    }
    for (int i = q.i_min; i < q.i_max; ++i) {
      if (!(collision_condition(q, i) > 0.0)) {
        reason = "collision i=" + std::to_string(i);
        return false;
      }
    }
    return true;
  };

  MassCap out;
  std::string reason;
  double lo = p.M * 1e-15;
  double hi = p.M;
  if (!check(lo, reason)) {
    out.diagnostic = "no mass qualifies: even m_max = 1e-15 M fails (" + reason + ")";
    return out;
  }
  if (check(hi, reason)) {
    out.mass = hi;
    out.diagnostic = "constraints hold up to m_max = M";
    return out;
  }
  out.binding = reason;
  while (hi / lo - 1.0 > 1e-4) {
    const double mid = std::sqrt(lo * hi);
    if (check(mid, reason)) {
      lo = mid;
    } else {
      hi = mid;
      out.binding = reason;
    }
  }
  out.mass = lo;
  return out;
}

double tree_bound_small_N(int n, int distinguished, const graphs::EdgeWeights& vbar) {
  graphs::check_vertex_cap(n, graphs::kMaxIdentityVertices);
  if (vbar.vertex_count() != n) throw DomainError("pair bounds defined on a different vertex count");
  if (distinguished < 0 || distinguished >= n) throw DomainError("distinguished body out of range");
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double v = vbar.v(i, j);
      if (!(v >= 0.0) || v > 0.5) {
        throw DomainError("pair bound vbar(" + std::to_string(i) + "," + std::to_string(j) +
                          ") = " + fmt(v) + " outside [0, 1/2]");
      }
    }
  }
  double total = 0.0;
  for (std::uint32_t subset = 1; subset < (1u << n); ++subset) {
    if (!((subset >> distinguished) & 1u) || std::popcount(subset) < 2) continue;
    std::vector<int> labels;
    int root = 0;
    for (int v = 0; v < n; ++v) {
      if ((subset >> v) & 1u) {
        if (v == distinguished) root = static_cast<int>(labels.size());
        labels.push_back(v);
      }
    }
    const int k = static_cast<int>(labels.size());
    const graphs::PartitionScheme& scheme = graphs::partition_scheme(k, root);
    if (!scheme.valid) throw std::logic_error("partition scheme failed validation");
    const auto tree_factor = [&](int a, int b) { return 1.25 * vbar.v(labels[a], labels[b]); };
    const auto extra_factor = [&](int a, int b) { return std::exp(vbar.v(labels[a], labels[b])); };
    for (const auto& [tau, extra] : scheme.extra_edges) {
      total += graphs::edge_product(k, tau, tree_factor) * graphs::edge_product(k, extra, extra_factor);
    }
  }
  return total;
}

EpsilonBound tree_bound(int n, int distinguished, const graphs::EdgeWeights& vbar) {
  EpsilonBound out;
  out.kind = "tree";
  out.record("n", n);
  out.record("distinguished", distinguished);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      out.record("vbar_" + std::to_string(i) + "_" + std::to_string(j), vbar.v(i, j));
    }
  }
  out.value = tree_bound_small_N(n, distinguished, vbar);
  return out;
}

graphs::EdgeWeights pair_linf_bound(const model::StarSystem& system) {
  const int n = static_cast<int>(system.size());
  graphs::EdgeWeights w(n);
  for (const model::PairCoupling& pc : model::pair_couplings(system)) {
    const double contact =
        system.bodies[pc.i].body_radius + system.bodies[pc.j].body_radius;
    w.set_v(static_cast<int>(pc.i), static_cast<int>(pc.j), pc.gamma_ij * pc.r_ij / contact);
  }
  return w;
}

EpsilonBound tree_majorant(int n, double vbar) {
  return similar_epsilon_bound(1.25 * n * vbar, n * vbar);
}

namespace {

double truncated_weight(double xi, double gamma) {
  const double s = 1.0 + xi;
  if (!(s > 0.0)) return 0.0;
  const double q = xi / s;
  return std::exp(-0.5 * gamma * gamma * q * q);
}

std::vector<double> truncated_breaks(double gamma, double A_upper) {
  const double L = std::min(0.5, 40.0 / gamma);
  std::vector<double> pts{-0.5 * (1.0 + L), -L};
  if (8.0 / gamma < L) {
    pts.push_back(-8.0 / gamma);
    pts.push_back(0.0);
    pts.push_back(8.0 / gamma);
  } else {
    pts.push_back(0.0);
  }
  for (double x = L; x < A_upper; x *= 2.0) pts.push_back(x);
  return pts;
}

double truncated_moment(double gamma, double A_upper, int power) {
  require_positive(gamma, "gamma");
  require_positive(A_upper, "A_upper");
  const auto breaks = truncated_breaks(gamma, A_upper);
  quad::Options opt;
  opt.rel_tol = 1e-11;
  opt.max_depth = 20;
  const auto f = [gamma, power](double xi) {
    return std::pow(xi, power) * truncated_weight(xi, gamma);
  };
  return quad::integrate(f, -1.0, A_upper, opt, breaks).value;
}

}  // namespace

double truncated_partition(double gamma, double A_upper) {
  return model::kTwoPi * truncated_moment(gamma, A_upper, 0);
}

double truncated_variance(double gamma, double A_upper) {
  return truncated_moment(gamma, A_upper, 2) / truncated_moment(gamma, A_upper, 0);
}

double truncated_tail_mass(double gamma, double A_upper) {
  require_positive(gamma, "gamma");
  require_positive(A_upper, "A_upper");
  quad::Options opt;
  opt.rel_tol = 1e-10;
  const auto f = [gamma](double xi) { return truncated_weight(xi, gamma); };
  double total = quad::integrate(f, -1.0, -0.5, opt).value;
  if (A_upper > 0.5) {
    std::vector<double> breaks;
    for (double x = 1.0; x < A_upper; x *= 2.0) breaks.push_back(x);
    total += quad::integrate(f, 0.5, A_upper, opt, breaks).value;
  }
  return total;
}

double truncated_tail_bound(double gamma, double A_upper) {
  return A_upper * std::exp(-gamma * gamma / 18.0);
}

double gaussian_partition_limit(double gamma) {
  require_positive(gamma, "gamma");
  return model::kTwoPi * std::sqrt(model::kTwoPi) / gamma;
}

}  // namespace beltstab::bounds
