#include "beltstab/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "beltstab/bounds.hpp"
#include "beltstab/errors.hpp"
#include "beltstab/statistics.hpp"

namespace beltstab::sampler {

using model::kPi;
using model::kTwoPi;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::mt19937_64 chain_rng(std::uint64_t seed, std::size_t chain) {
  return std::mt19937_64(splitmix64(seed + 0x9E3779B97F4A7C15ull * (chain + 1)));
}

std::vector<FreeSample> sample_free(double gamma, std::size_t n, std::uint64_t seed) {
  if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
  auto rng = chain_rng(seed, 0);
  std::normal_distribution<double> normal(0.0, 1.0 / gamma);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::vector<FreeSample> out(n);
  for (auto& s : out) {
    s.xi = normal(rng);
    s.theta = angle(rng);
  }
  return out;
}

namespace {

double truncated_weight(double xi, double gamma) {
  const double q = xi / (1.0 + xi);
  return std::exp(-0.5 * gamma * gamma * q * q);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

TruncatedSampler::TruncatedSampler(double gamma_, double A_upper_)
    : gamma(gamma_), A_upper(A_upper_) {
  if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
  if (!(A_upper > 0.0)) throw DomainError("A_upper must be positive");
  sigma = 1.5 / gamma;
  const double u = std::min(0.5, A_upper);
  gauss_mass = sigma * std::sqrt(kTwoPi) * (normal_cdf(u / sigma) - normal_cdf(-1.0 / sigma));
  flat_height = std::exp(-gamma * gamma / 18.0);
  flat_mass = A_upper > 0.5 ? (A_upper - 0.5) * flat_height : 0.0;
  const double target = bounds::truncated_partition(gamma, A_upper) / kTwoPi;
  efficiency = target / (gauss_mass + flat_mass);
  if (!(efficiency >= 1e-6)) {
    std::ostringstream msg;
    msg << "truncated rejection sampler efficiency " << efficiency << " is below 1e-6 (gamma "
        << gamma << ", A " << A_upper << ")";
    throw SamplingError(msg.str());
  }
}

double TruncatedSampler::draw_xi(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, sigma);
  const double u_max = std::min(0.5, A_upper);
  const double p_gauss = gauss_mass / (gauss_mass + flat_mass);
  while (true) {
    double xi = 0.0;
    double envelope = 0.0;
    if (unit(rng) < p_gauss) {
      do {
        xi = normal(rng);
      } while (!(xi > -1.0 && xi <= u_max));
      envelope = std::exp(-0.5 * xi * xi / (sigma * sigma));
    } else {
      xi = 0.5 + (A_upper - 0.5) * (1.0 - unit(rng));
      envelope = flat_height;
    }
    if (unit(rng) * envelope < truncated_weight(xi, gamma)) return xi;
  }
}

std::vector<FreeSample> sample_free_truncated(double gamma, double A_upper, std::size_t n,
                                              std::uint64_t seed) {
  const TruncatedSampler sampler(gamma, A_upper);
  auto rng = chain_rng(seed, 0);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::vector<FreeSample> out(n);
  for (auto& s : out) {
    s.xi = sampler.draw_xi(rng);
    s.theta = angle(rng);
  }
  return out;
}

GibbsModel GibbsModel::from_system(const model::StarSystem& system) {
  system.validate();
  GibbsModel m;
  const std::size_t n = system.size();
  for (const auto& b : system.bodies) {
    m.gamma.push_back(b.gamma);
    m.orbit_radius.push_back(b.orbit_radius);
    m.body_radius.push_back(b.body_radius);
  }
  m.coupling.assign(n * n, 0.0);
  for (const auto& pc : model::pair_couplings(system)) m.set_pair(pc.i, pc.j, pc.gamma_ij * pc.r_ij);
  return m;
}

void GibbsModel::set_pair(std::size_t i, std::size_t j, double value) {
  coupling[i * size() + j] = value;
  coupling[j * size() + i] = value;
}

void GibbsModel::zero_couplings() { std::fill(coupling.begin(), coupling.end(), 0.0); }

double GibbsModel::free_energy(std::size_t i, double xi) const {
  const double g2 = gamma[i] * gamma[i];
  if (free_measure == FreeMeasure::gaussian) return 0.5 * g2 * xi * xi;
  const double q = xi / (1.0 + xi);
  return 0.5 * g2 * q * q;
}

namespace {

model::Point2 place(const GibbsModel& m, std::size_t i, double xi, double theta) {
  const double rho = m.orbit_radius[i] * (1.0 + xi);
  return {rho * std::cos(theta), rho * std::sin(theta)};
}

bool xi_allowed(const GibbsModel& m, std::size_t i, double xi) {
  if (!(xi > -1.0)) return false;
  return m.free_measure == FreeMeasure::gaussian || xi <= m.xi_upper[i];
}

}  // namespace

bool GibbsModel::feasible(const model::Configuration& config) const {
  const std::size_t n = size();
  if (config.xi.size() != n || config.theta.size() != n) return false;
  std::vector<model::Point2> pts(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!xi_allowed(*this, i, config.xi[i])) return false;
    pts[i] = place(*this, i, config.xi[i], config.theta[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (model::distance(pts[i], pts[j]) < body_radius[i] + body_radius[j]) return false;
    }
  }
  return true;
}

double GibbsModel::energy(const model::Configuration& config) const {
  if (!feasible(config)) return std::numeric_limits<double>::infinity();
  const std::size_t n = size();
  double h = 0.0;
  std::vector<model::Point2> pts(n);
  for (std::size_t i = 0; i < n; ++i) {
    h += free_energy(i, config.xi[i]);
    pts[i] = place(*this, i, config.xi[i], config.theta[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (pair(i, j) != 0.0) h -= pair(i, j) / model::distance(pts[i], pts[j]);
    }
  }
  return h;
}

void ChainSettings::validate() const {
  if (steps <= burn_in) throw DomainError("steps must exceed burn_in");
  if (thinning < 1) throw DomainError("thinning must be at least 1");
  if (!(proposal_sigma_xi > 0.0)) throw DomainError("proposal_sigma_xi must be positive");
  if (n_chains < 1) throw DomainError("n_chains must be at least 1");
  if ((steps - burn_in) / thinning < 50) {
    throw DomainError("fewer than 50 recorded samples per chain; batch means need 50 batches");
  }
}

namespace {

constexpr std::size_t kBatches = 50;
constexpr std::uint64_t kAdaptWindow = 100;
constexpr double kTargetAcceptance = 0.4;

struct ChainResult {
  // Per body: batch means of xi and xi^2, autocorrelation time of xi^2.
  std::vector<std::vector<double>> batch_xi;
  std::vector<std::vector<double>> batch_xi2;
  std::vector<double> tau;
  bool tau_window_ok = true;
  std::uint64_t accepted_xi = 0;
  std::uint64_t proposed_xi = 0;
  std::uint64_t accepted_theta = 0;
  std::uint64_t proposed_theta = 0;
  std::uint64_t hard_core_rejections = 0;
  std::vector<double> sigma_xi;
};

class Chain {
 public:
  Chain(const GibbsModel& m, const ChainSettings& s, std::size_t index,
        const model::Configuration& start)
      : m_(m), s_(s), rng_(chain_rng(s.seed, index)), conf_(start), n_(m.size()) {
    pts_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) pts_[i] = place(m_, i, conf_.xi[i], conf_.theta[i]);
    sigma_.resize(n_);
    width_.assign(n_, kPi);
    for (std::size_t i = 0; i < n_; ++i) sigma_[i] = s_.proposal_sigma_xi / m_.gamma[i];
  }

  ChainResult run() {
    const std::uint64_t samples = (s_.steps - s_.burn_in) / s_.thinning;
    const std::uint64_t batch_len = samples / kBatches;
    ChainResult out;
    out.batch_xi.assign(n_, std::vector<double>(kBatches, 0.0));
    out.batch_xi2.assign(n_, std::vector<double>(kBatches, 0.0));
    std::vector<std::vector<float>> series(n_);
    for (auto& v : series) v.reserve(samples);

    std::vector<std::uint64_t> win_acc_xi(n_, 0), win_acc_th(n_, 0);
    std::uint64_t burn_accepted_xi = 0;
    std::uint64_t recorded = 0;

    for (std::uint64_t step = 0; step < s_.steps; ++step) {
      const bool burning = step < s_.burn_in;
      for (std::size_t i = 0; i < n_; ++i) {
        const double xi_new = conf_.xi[i] + sigma_[i] * normal_(rng_);
        ++proposed_xi_;
        if (propose(i, xi_new, conf_.theta[i])) {
          ++accepted_xi_;
          ++win_acc_xi[i];
          if (burning) ++burn_accepted_xi;
        }
        double th_new = conf_.theta[i] + width_[i] * (2.0 * unit_(rng_) - 1.0);
        th_new -= kTwoPi * std::floor(th_new / kTwoPi);
        ++proposed_theta_;
        if (propose(i, conf_.xi[i], th_new)) {
          ++accepted_theta_;
          ++win_acc_th[i];
        }
      }

      if (burning) {
        if ((step + 1) % kAdaptWindow == 0) {
          for (std::size_t i = 0; i < n_; ++i) {
            const double rx = static_cast<double>(win_acc_xi[i]) / kAdaptWindow;
            const double rt = static_cast<double>(win_acc_th[i]) / kAdaptWindow;
            sigma_[i] *= std::exp(rx - kTargetAcceptance);
            width_[i] = std::min(kPi, width_[i] * std::exp(rt - kTargetAcceptance));
            win_acc_xi[i] = 0;
            win_acc_th[i] = 0;
          }
        }
        if (step + 1 == s_.burn_in) {
          if (burn_accepted_xi == 0) {
            throw SamplingError("no xi move was accepted during burn-in (" +
                                std::to_string(s_.burn_in) + " sweeps); the start is stuck");
          }
          // Frozen from here on; the counters restart for the production run.
          accepted_xi_ = proposed_xi_ = accepted_theta_ = proposed_theta_ = 0;
          hard_core_rejections_ = 0;
        }
        continue;
      }

      if ((step - s_.burn_in + 1) % s_.thinning != 0 || recorded >= samples) continue;
      const std::uint64_t b = batch_len > 0 ? recorded / batch_len : kBatches;
      for (std::size_t i = 0; i < n_; ++i) {
        const double x = conf_.xi[i];
        series[i].push_back(static_cast<float>(x * x));
        if (b < kBatches) {
          out.batch_xi[i][b] += x;
          out.batch_xi2[i][b] += x * x;
        }
      }
      ++recorded;
    }

    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t b = 0; b < kBatches; ++b) {
        out.batch_xi[i][b] /= static_cast<double>(batch_len);
        out.batch_xi2[i][b] /= static_cast<double>(batch_len);
      }
      std::vector<double> xs(series[i].begin(), series[i].end());
      series[i].clear();
      series[i].shrink_to_fit();
      const auto ac = stats::integrated_autocorr_time(xs);
      out.tau.push_back(ac.tau);
      out.tau_window_ok = out.tau_window_ok && ac.window_ok;
    }
    out.accepted_xi = accepted_xi_;
    out.proposed_xi = proposed_xi_;
    out.accepted_theta = accepted_theta_;
    out.proposed_theta = proposed_theta_;
    out.hard_core_rejections = hard_core_rejections_;
    out.sigma_xi = sigma_;
    return out;
  }

 private:
  bool propose(std::size_t i, double xi_new, double theta_new) {
    if (!xi_allowed(m_, i, xi_new)) return false;
    const model::Point2 p = place(m_, i, xi_new, theta_new);
    double delta = m_.free_energy(i, xi_new) - m_.free_energy(i, conf_.xi[i]);
    for (std::size_t j = 0; j < n_; ++j) {
      if (j == i) continue;
      const double d_new = model::distance(p, pts_[j]);
      if (d_new < m_.body_radius[i] + m_.body_radius[j]) {
        ++hard_core_rejections_;
        return false;
      }
      const double c = m_.pair(i, j);
      if (c != 0.0) delta -= c / d_new - c / model::distance(pts_[i], pts_[j]);
    }
    if (delta > 0.0 && !(unit_(rng_) < std::exp(-delta))) return false;
    conf_.xi[i] = xi_new;
    conf_.theta[i] = theta_new;
    pts_[i] = p;
    if (s_.audit_hard_core && !m_.feasible(conf_)) {
      throw std::logic_error("accepted state violates the hard core");
    }
    return true;
  }

  const GibbsModel& m_;
  const ChainSettings& s_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
  model::Configuration conf_;
  std::size_t n_;
  std::vector<model::Point2> pts_;
  std::vector<double> sigma_;
  std::vector<double> width_;
  std::uint64_t accepted_xi_ = 0;
  std::uint64_t proposed_xi_ = 0;
  std::uint64_t accepted_theta_ = 0;
  std::uint64_t proposed_theta_ = 0;
  std::uint64_t hard_core_rejections_ = 0;
};

}  // namespace

SampleStats metropolis_run(const GibbsModel& m, const ChainSettings& settings,
                           const std::optional<model::Configuration>& start) {
  settings.validate();
  const std::size_t n = m.size();
  if (n == 0) throw DomainError("metropolis_run needs at least one body");
  if (m.free_measure == FreeMeasure::truncated && m.xi_upper.size() != n) {
    throw DomainError("truncated free measure needs one xi_upper per body");
  }
  const model::Configuration init = start ? *start : model::Configuration::circular(n);
  if (!m.feasible(init)) {
    throw SamplingError("initial configuration violates the hard core or the xi domain");
  }

  std::vector<ChainResult> results(settings.n_chains);
  std::vector<std::exception_ptr> errors(settings.n_chains);
  const auto work = [&](std::size_t c) {
    try {
      results[c] = Chain(m, settings, c, init).run();
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };
  if (settings.parallel && settings.n_chains > 1) {
    std::vector<std::thread> threads;
    for (std::size_t c = 0; c < settings.n_chains; ++c) threads.emplace_back(work, c);
    for (auto& t : threads) t.join();
  } else {
    for (std::size_t c = 0; c < settings.n_chains; ++c) work(c);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SampleStats out;
  out.n_chains = settings.n_chains;
  out.samples_per_chain = (settings.steps - settings.burn_in) / settings.thinning;
  out.final_sigma_xi = results.front().sigma_xi;
  std::uint64_t acc_x = 0, prop_x = 0, acc_t = 0, prop_t = 0;
  out.tau_max = 0.0;
  for (const auto& r : results) {
    acc_x += r.accepted_xi;
    prop_x += r.proposed_xi;
    acc_t += r.accepted_theta;
    prop_t += r.proposed_theta;
    out.hard_core_rejections += r.hard_core_rejections;
    out.tau_window_ok = out.tau_window_ok && r.tau_window_ok;
  }
  out.acceptance_xi = prop_x ? static_cast<double>(acc_x) / static_cast<double>(prop_x) : 0.0;
  out.acceptance_theta = prop_t ? static_cast<double>(acc_t) / static_cast<double>(prop_t) : 0.0;

  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> bx, bx2;
    BodyStats bs;
    bs.tau = 0.0;
    for (const auto& r : results) {
      bx.insert(bx.end(), r.batch_xi[i].begin(), r.batch_xi[i].end());
      bx2.insert(bx2.end(), r.batch_xi2[i].begin(), r.batch_xi2[i].end());
      bs.tau = std::max(bs.tau, r.tau[i]);
    }
    const double nb = static_cast<double>(bx.size());
    bs.mean_xi = stats::mean(bx);
    bs.mean_xi_se = std::sqrt(stats::variance(bx) / nb);
    bs.second_moment = stats::mean(bx2);
    bs.second_moment_se = std::sqrt(stats::variance(bx2) / nb);
    bs.var_xi = std::max(0.0, bs.second_moment - bs.mean_xi * bs.mean_xi);
    out.tau_max = std::max(out.tau_max, bs.tau);
    out.bodies.push_back(bs);
  }
  out.converged = out.tau_window_ok &&
                  out.tau_max < static_cast<double>(out.samples_per_chain) / 1000.0 &&
                  std::all_of(out.bodies.begin(), out.bodies.end(), [](const BodyStats& b) {
                    return std::isfinite(b.second_moment_se);
                  });
  return out;
}

SampleStats metropolis_run(const model::StarSystem& system, const ChainSettings& settings) {
  return metropolis_run(GibbsModel::from_system(system), settings);
}

std::vector<EpsilonEstimate> empirical_epsilon(const SampleStats& stats,
                                               const std::vector<double>& gamma_per_body) {
  if (!stats.converged) {
    std::ostringstream msg;
    msg << "statistics are not converged (tau " << stats.tau_max << " vs "
        << static_cast<double>(stats.samples_per_chain) / 1000.0 << " allowed)";
    throw SamplingError(msg.str());
  }
  if (gamma_per_body.size() != stats.bodies.size()) {
    throw DomainError("one gamma per body is required");
  }
  std::vector<EpsilonEstimate> out;
  for (std::size_t i = 0; i < stats.bodies.size(); ++i) {
    const double g2 = gamma_per_body[i] * gamma_per_body[i];
    out.push_back({stats.bodies[i].second_moment * g2 - 1.0, stats.bodies[i].second_moment_se * g2});
  }
  return out;
}

}  // namespace beltstab::sampler
