#pragma once

// Closed-form epsilon upper bounds for three belt geometries, the exact
// small-N tree-graph evaluator, and the truncated single-planet measure.
//
// Divergence (a geometric-series denominator reaching zero) is a value, not an
// exception, so sweeps can cross the wall. Violated preconditions of a bound
// chain (c3 >= 1/2, a pair bound above 1/2) are DomainErrors.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "beltstab/graphs.hpp"
#include "beltstab/model.hpp"

namespace beltstab::bounds {

/// N bodies of common orbit radius R, common gamma, sizes in [a, 2a].
struct SimilarBeltParams {
  std::uint64_t N = 1;
  double a = 0.0;              // m
  double gamma = 0.0;
  double density_ratio = 0.0;  // body density / star density
  double R = 0.0;              // m
  double R_s = 0.0;            // m

  void validate() const;
};

/// Power-law belt N(>a) = N / a^nu with sizes in [1, 2^L] (units of a_min).
struct PowerLawBeltParams {
  std::uint64_t N = 1;
  double nu = 2.0;
  int L = 1;
  double gamma = 0.0;
  double density_ratio = 0.0;
  double R = 0.0;            // units of a_min
  double R_s = 0.0;          // units of a_min
  double unit_length = 0.0;  // m, physical size of a_min

  void validate() const;
};

enum class PlanetEstimate {
  closed_form,       // the exponential majorant of the tree sum
  tree_enumeration,  // exact tree sum with pair bounds c3 a^{-|j-i|}
};

std::string_view to_string(PlanetEstimate e);
PlanetEstimate planet_estimate_from_string(std::string_view s);

/// Orbits R_i = b + c a^i for i in [i_min, i_max]. Lengths in any one unit.
struct PlanetChainParams {
  double b = 0.0;
  double c = 0.0;
  double a = 0.0;
  int i_min = 0;
  int i_max = 0;
  double gamma = 0.0;
  double k_typical = 0.0;
  std::vector<double> masses;        // kg
  std::vector<double> planet_radii;  // same length unit as b, c
  double M = 0.0;                    // kg
  std::optional<double> c2_override;
  PlanetEstimate estimate = PlanetEstimate::closed_form;

  std::size_t count() const { return static_cast<std::size_t>(i_max - i_min + 1); }
  double orbit(int i) const;
  double max_mass() const;
  void validate() const;
};

struct EpsilonBound {
  std::string kind;
  std::optional<double> value;  // empty when the bound diverged
  std::vector<std::pair<std::string, double>> intermediates;

  bool diverged() const { return !value.has_value(); }
  void record(std::string name, double v) { intermediates.emplace_back(std::move(name), v); }
  /// Throws std::out_of_range for an unknown name.
  double intermediate(std::string_view name) const;
};

/// Re-evaluates a bound from its recorded intermediates alone. The result is
/// bit-identical to the original evaluation.
EpsilonBound recompute(const EpsilonBound& bound);

// Similar asteroids.

struct SimilarConstants {
  double A = 0.0;
  double A_bar = 0.0;
};

SimilarConstants similar_A(const SimilarBeltParams& p);
EpsilonBound similar_epsilon_bound(double A, double A_bar);
EpsilonBound similar_epsilon_bound(const SimilarBeltParams& p);

struct MaxCount {
  std::uint64_t N = 0;
  std::string diagnostic;  // non-empty when nothing qualifies
};

/// Largest N whose bound is finite and <= eps_target.
MaxCount similar_max_N(SimilarBeltParams p, double eps_target);

// Power-law belt.

double powerlaw_class_size(double N, int l);
/// Upper bound on |V_ij| for i in class l, j in class m, l >= m.
double powerlaw_w(int l, int m, const PowerLawBeltParams& p);
double powerlaw_A(const PowerLawBeltParams& p);
EpsilonBound powerlaw_epsilon_bound(const PowerLawBeltParams& p);
MaxCount powerlaw_max_N(PowerLawBeltParams p, double eps_target);
/// The value of A at which A L e^A = 1 for the given L.
double powerlaw_divergence_A(int L);

/// Closed form of the double size integral bounding sum |V_ij| for a
/// power-law tail with a_max = N1^{1/nu}. `coupling_prefactor` is
/// (gamma+1)(delta/delta_s) R / R_s^3; the factor nu^2 N1^2/(nu+1) is applied here.
double small_asteroid_tail_bound(double N1, double nu, double a_min, double coupling_prefactor);

// Titius-Bode planet chains.

struct PlanetConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
};

PlanetConstants planet_constants(const PlanetChainParams& p);
/// Closed-form estimate; requires c3 < 1/2.
EpsilonBound planets_epsilon_bar(const PlanetChainParams& p);
/// Exact tree sum with pair bounds c3 a^{-|j-i|}, maximised over the
/// distinguished planet. Requires c3 / a <= 1/2 and N <= 6.
EpsilonBound planets_epsilon_bar_explicit(const PlanetChainParams& p);
/// Dispatches on p.estimate.
EpsilonBound planets_bound(const PlanetChainParams& p);
/// 2k^2/9 - c3 c1 a^i (a-1) / (a (r_i + r_{i+1})); positive means controlled.
double collision_condition(const PlanetChainParams& p, int i);

/// Copy of p with masses rescaled so that the largest equals m_max.
PlanetChainParams with_max_mass(PlanetChainParams p, double m_max);

struct MassCap {
  double mass = 0.0;       // kg
  std::string binding;     // "epsilon_bar", "collision i=<n>" or "c3" at the cap
  std::string diagnostic;  // non-empty when nothing qualifies
};

/// Largest m_max (1e-3 relative) meeting the epsilon target and every collision condition.
MassCap planets_max_mass(const PlanetChainParams& p, double eps_target);

// Tree-graph bound.

/// sum over X containing `distinguished` (|X| >= 2) and trees tau on X of
/// prod_{E(tau)} (5/4) vbar_ij prod_{m(tau)} e^{vbar_ij}, with the partition
/// scheme rooted at the distinguished vertex. Every vbar must be <= 1/2.
double tree_bound_small_N(int n, int distinguished, const graphs::EdgeWeights& vbar);
EpsilonBound tree_bound(int n, int distinguished, const graphs::EdgeWeights& vbar);

/// Sup over hard-core feasible configurations of gamma_ij r_ij / |x_i - x_j|,
/// attained at contact: gamma_ij r_ij / (a_i + a_j).
graphs::EdgeWeights pair_linf_bound(const model::StarSystem& system);

/// Geometric-series majorant of the uniform tree sum: the similar-belt bound
/// at A = (5/4) n vbar, A_bar = n vbar.
EpsilonBound tree_majorant(int n, double vbar);

// Truncated single-planet measure exp(-(gamma^2/2) xi^2/(1+xi)^2) on (-1, A].

/// 2 pi times the xi integral; relative accuracy 1e-8.
double truncated_partition(double gamma, double A_upper);
/// <xi^2> under the normalised truncated measure.
double truncated_variance(double gamma, double A_upper);
/// The xi integral restricted to |xi| > 1/2.
double truncated_tail_mass(double gamma, double A_upper);
/// L-infinity majorant A e^{-gamma^2/18} of truncated_tail_mass.
double truncated_tail_bound(double gamma, double A_upper);
/// 2 pi sqrt(2 pi) / gamma.
double gaussian_partition_limit(double gamma);

}  // namespace beltstab::bounds
