#pragma once

// Monte Carlo sampling of the free and interacting orbital measures.
//
// Per-chain random streams: chain c of a run with master seed s is driven by
// a std::mt19937_64 seeded with splitmix64(s + 0x9E3779B97F4A7C15 * (c + 1)).
// Chains are merged in index order, so results do not depend on whether they
// ran on threads.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "beltstab/model.hpp"

namespace beltstab::sampler {

std::uint64_t splitmix64(std::uint64_t x);
std::mt19937_64 chain_rng(std::uint64_t seed, std::size_t chain);

struct FreeSample {
  double xi = 0.0;
  double theta = 0.0;
};

/// xi ~ Normal(0, 1/gamma^2), theta ~ Uniform[0, 2 pi).
std::vector<FreeSample> sample_free(double gamma, std::size_t n, std::uint64_t seed);

struct TruncatedSampler {
  double gamma = 0.0;
  double A_upper = 0.0;
  double sigma = 0.0;          // envelope Gaussian width 3/(2 gamma)
  double gauss_mass = 0.0;     // envelope mass on (-1, min(1/2, A)]
  double flat_height = 0.0;    // e^{-gamma^2/18} on (1/2, A]
  double flat_mass = 0.0;
  double efficiency = 0.0;     // target mass / envelope mass

  /// Throws SamplingError when the acceptance efficiency is below 1e-6.
  TruncatedSampler(double gamma, double A_upper);
  double draw_xi(std::mt19937_64& rng) const;
};

/// Draws from exp(-(gamma^2/2) xi^2/(1+xi)^2) on (-1, A_upper] by rejection
/// from a Gaussian-plus-flat envelope; theta uniform.
std::vector<FreeSample> sample_free_truncated(double gamma, double A_upper, std::size_t n,
                                              std::uint64_t seed);

enum class FreeMeasure {
  gaussian,   // (1/2) gamma^2 xi^2 on xi > -1
  truncated,  // (gamma^2/2) xi^2/(1+xi)^2 on (-1, xi_upper]
};

/// The energy function seen by the chain: free terms, pair couplings
/// gamma_ij r_ij and hard-core contact distances.
struct GibbsModel {
  std::vector<double> gamma;
  std::vector<double> orbit_radius;
  std::vector<double> body_radius;
  std::vector<double> coupling;  // n*n, symmetric, gamma_ij r_ij
  FreeMeasure free_measure = FreeMeasure::gaussian;
  std::vector<double> xi_upper;  // used by the truncated measure

  static GibbsModel from_system(const model::StarSystem& system);
  std::size_t size() const { return gamma.size(); }
  double pair(std::size_t i, std::size_t j) const { return coupling[i * size() + j]; }
  void set_pair(std::size_t i, std::size_t j, double value);
  void zero_couplings();

  double free_energy(std::size_t i, double xi) const;
  /// Full H; +infinity when the hard core is violated.
  double energy(const model::Configuration& config) const;
  bool feasible(const model::Configuration& config) const;
};

struct ChainSettings {
  std::uint64_t steps = 100000;  // total sweeps, burn-in included
  std::uint64_t burn_in = 10000;
  std::uint64_t thinning = 1;
  double proposal_sigma_xi = 2.4;  // xi proposal width in units of 1/gamma_i
  std::uint64_t seed = 0;
  std::size_t n_chains = 1;
  bool parallel = true;
  bool audit_hard_core = false;  // re-check every accepted state

  void validate() const;
};

struct BodyStats {
  double mean_xi = 0.0;
  double var_xi = 0.0;
  double second_moment = 0.0;     // <xi^2>
  double second_moment_se = 0.0;  // batch means over all chains
  double mean_xi_se = 0.0;
  double tau = 1.0;               // worst chain, in recorded samples
};

struct SampleStats {
  std::vector<BodyStats> bodies;
  double acceptance_xi = 0.0;
  double acceptance_theta = 0.0;
  std::uint64_t hard_core_rejections = 0;
  std::uint64_t samples_per_chain = 0;
  std::size_t n_chains = 0;
  double tau_max = 1.0;
  bool tau_window_ok = true;
  bool converged = false;
  std::vector<double> final_sigma_xi;  // frozen proposal widths after burn-in
};

/// Single-site Metropolis. `steps` counts sweeps (one xi move and one theta
/// move per body) including burn_in; samples are recorded every `thinning`
/// sweeps after burn-in. Throws SamplingError for an infeasible start or a
/// burn-in without any accepted xi move.
SampleStats metropolis_run(const GibbsModel& model, const ChainSettings& settings,
                           const std::optional<model::Configuration>& start = std::nullopt);
SampleStats metropolis_run(const model::StarSystem& system, const ChainSettings& settings);

struct EpsilonEstimate {
  double value = 0.0;
  double se = 0.0;
};

/// <xi_i^2> gamma_i^2 - 1 per body. Throws SamplingError for non-converged stats.
std::vector<EpsilonEstimate> empirical_epsilon(const SampleStats& stats,
                                               const std::vector<double>& gamma_per_body);

}  // namespace beltstab::sampler
